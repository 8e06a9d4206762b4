#include "sympath/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sympath/error.hpp"
#include "sympath/rng.hpp"

namespace sympath {
namespace {

// Fills `out[from .. n-1]` with increments sqrt(dt) * Z from the substream.
void fill_increments(const StreamId& id, double sqrt_dt, std::size_t count, double* out) {
  NormalStream stream(id);
  for (std::size_t i = 0; i < count; ++i) out[i] = sqrt_dt * stream.next();
}

std::uint32_t stream_component(std::uint32_t driver, std::uint32_t restart) {
  return restart == 0 ? driver : restart_component(driver, restart - 1);
}

// Driver increments for steps from..n-1, stored in scratch as [driver][step].
double* driver_increments(const TimeGrid& grid, std::uint64_t seed, std::size_t path, unsigned n_drivers,
                          std::size_t from, std::uint32_t restart, PathBuffer& buf) {
  const std::size_t steps = grid.n_steps() - from;
  auto& scratch = buf.scratch();
  scratch.resize(static_cast<std::size_t>(n_drivers) * grid.n_steps());
  const double sqrt_dt = std::sqrt(grid.step());
  for (unsigned d = 0; d < n_drivers; ++d) {
    fill_increments(StreamId{seed, path, stream_component(d, restart)}, sqrt_dt, steps,
                    scratch.data() + d * grid.n_steps());
  }
  return scratch.data();
}

void finish_price(std::span<const double> x, std::span<double> s, std::size_t from) {
  for (std::size_t i = from; i < x.size(); ++i) s[i] = std::exp(x[i]);
}

// Component indices follow ProcessSpec::components().
void advance_gbm(const Gbm& g, const TimeGrid& grid, const double* dw, std::size_t from, PathBuffer& buf) {
  auto w = buf.component(0), y = buf.component(1), qv = buf.component(2), x = buf.component(3), s = buf.component(4);
  const double drift = g.lambda - 0.5 * g.sigma * g.sigma;
  const double log_s0 = std::log(g.s0);
  for (std::size_t i = from; i < grid.n_steps(); ++i) w[i + 1] = w[i] + dw[i - from];
  for (std::size_t i = from + 1; i < grid.size(); ++i) {
    const double t = grid.time(i);
    y[i] = g.sigma * w[i];
    qv[i] = g.sigma * g.sigma * t;
    x[i] = log_s0 + g.sigma * w[i] + drift * t;
  }
  finish_price(x, s, from + 1);
}

void advance_ocone(const OconeSv& o, const TimeGrid& grid, const double* db, const double* dw, std::size_t from,
                   PathBuffer& buf) {
  auto b = buf.component(0), w = buf.component(1), v = buf.component(2), m = buf.component(3),
       qv = buf.component(4), x = buf.component(5), s = buf.component(6);
  const double dt = grid.step();
  // Stored V is max(V, 0); once the raw value is <= 0 the full-truncation
  // scheme freezes it, so restarting from the stored value is equivalent.
  double v_raw = v[from];
  for (std::size_t i = from; i < grid.n_steps(); ++i) {
    const double vp = std::max(v_raw, 0.0);
    const double dbi = db[i - from], dwi = dw[i - from];
    b[i + 1] = b[i] + dbi;
    w[i + 1] = w[i] + dwi;
    m[i + 1] = m[i] + vp * dbi;
    qv[i + 1] = qv[i] + vp * vp * dt;
    v_raw = v_raw - o.mu * vp * dt + std::sqrt(vp) * dwi;
    v[i + 1] = std::max(v_raw, 0.0);
    x[i + 1] = m[i + 1] - 0.5 * qv[i + 1];
  }
  finish_price(x, s, from + 1);
}

void advance_cubic(const TimeGrid& grid, const double* db, std::size_t from, PathBuffer& buf) {
  auto b = buf.component(0), m = buf.component(1), qv = buf.component(2), x = buf.component(3), s = buf.component(4);
  const double dt = grid.step();
  for (std::size_t i = from; i < grid.n_steps(); ++i) {
    const double b2 = b[i] * b[i];
    b[i + 1] = b[i] + db[i - from];
    m[i + 1] = m[i] + b2 * db[i - from];
    qv[i + 1] = qv[i] + b2 * b2 * dt;
    x[i + 1] = m[i + 1] - 0.5 * qv[i + 1];
  }
  finish_price(x, s, from + 1);
}

void advance_levy(const TimeGrid& grid, const double* d1, const double* d2, std::size_t from, PathBuffer& buf) {
  auto b1 = buf.component(0), b2 = buf.component(1), a = buf.component(2), qv = buf.component(3),
       x = buf.component(4), s = buf.component(5);
  const double dt = grid.step();
  for (std::size_t i = from; i < grid.n_steps(); ++i) {
    const double u = d1[i - from], v = d2[i - from];
    a[i + 1] = a[i] + 0.5 * (b1[i] * v - b2[i] * u);
    qv[i + 1] = qv[i] + 0.25 * (b1[i] * b1[i] + b2[i] * b2[i]) * dt;
    b1[i + 1] = b1[i] + u;
    b2[i + 1] = b2[i] + v;
    x[i + 1] = a[i + 1] - 0.5 * qv[i + 1];
  }
  finish_price(x, s, from + 1);
}

void initialise(const ProcessSpec& spec, PathBuffer& buf) {
  for (std::size_t c = 0; c < buf.n_components(); ++c) buf.component(c)[0] = 0.0;
  const auto names = spec.components();
  const auto idx = [&](const char* n) {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), n) - names.begin());
  };
  const ProcessSpec* base = &spec;
  if (const auto* q = spec.get_if<QsdLift>()) base = q->base.get();
  if (const auto* o = base->get_if<OconeSv>()) buf.component(idx("V"))[0] = o->v0;
  // A lift starts at S_0 = 1 whatever the base's initial price.
  if (const auto* g = spec.get_if<Gbm>()) buf.component(idx("X"))[0] = std::log(g->s0);
  buf.component(idx("S"))[0] = std::exp(buf.component(idx("X"))[0]);
}

void advance(const ProcessSpec& spec, const TimeGrid& grid, std::uint64_t seed, std::size_t path, std::size_t from,
             std::uint32_t restart, PathBuffer& buf) {
  if (const auto* q = spec.get_if<QsdLift>()) {
    advance(*q->base, grid, seed, path, from, restart, buf);
    const auto names = q->base->components();
    const auto idx = [&](const std::string& nme) {
      return static_cast<std::size_t>(std::find(names.begin(), names.end(), nme) - names.begin());
    };
    auto m = buf.component(idx(q->base->martingale_component()));
    auto qv = buf.component(idx("QV"));
    auto x = buf.component(idx("X"));
    auto s = buf.component(idx("S"));
    for (std::size_t i = from + 1; i < grid.size(); ++i) x[i] = q->kappa * qv[i] + m[i] - 0.5 * qv[i];
    finish_price(x, s, from + 1);
    return;
  }
  const double* inc = driver_increments(grid, seed, path, spec.n_drivers(), from, restart, buf);
  const std::size_t n = grid.n_steps();
  if (const auto* g = spec.get_if<Gbm>()) {
    advance_gbm(*g, grid, inc, from, buf);
  } else if (const auto* o = spec.get_if<OconeSv>()) {
    advance_ocone(*o, grid, inc, inc + n, from, buf);
  } else if (spec.get_if<CubicBm>()) {
    advance_cubic(grid, inc, from, buf);
  } else if (spec.get_if<LevyArea>()) {
    advance_levy(grid, inc, inc + n, from, buf);
  }
}

void check_finite(const PathBuffer& buf, std::size_t path) {
  for (std::size_t c = 0; c < buf.n_components(); ++c) {
    for (double v : buf.component(c)) {
      if (!std::isfinite(v)) throw SimulationFailure(path, "non-finite value during path generation");
    }
  }
}

}  // namespace

PathBundle simulate_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed, unsigned n_components,
                             Storage storage) {
  SYMPATH_REQUIRE(n_paths >= 1, "simulate_brownian: n_paths must be >= 1");
  SYMPATH_REQUIRE(n_components == 1 || n_components == 2, "simulate_brownian: n_components must be 1 or 2");
  std::vector<std::string> names = n_components == 1 ? std::vector<std::string>{"W"}
                                                     : std::vector<std::string>{"W1", "W2"};
  PathGenerator gen = [grid, seed, n_components](std::size_t path, PathBuffer& buf) {
    const double* inc = driver_increments(grid, seed, path, n_components, 0, 0, buf);
    for (unsigned c = 0; c < n_components; ++c) {
      auto w = buf.component(c);
      w[0] = 0.0;
      const double* d = inc + c * grid.n_steps();
      for (std::size_t i = 0; i < grid.n_steps(); ++i) w[i + 1] = w[i] + d[i];
    }
  };
  PathBundle bundle(grid, n_paths, seed, "Brownian" + std::to_string(n_components), std::move(names), std::move(gen));
  return storage == Storage::Materialized ? bundle.materialize() : bundle;
}

PathBundle simulate_process(const ProcessSpec& spec, const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                            Storage storage) {
  spec.validate();
  SYMPATH_REQUIRE(n_paths >= 1, "simulate_process: n_paths must be >= 1");
  PathGenerator gen = [spec, grid, seed](std::size_t path, PathBuffer& buf) {
    initialise(spec, buf);
    advance(spec, grid, seed, path, 0, 0, buf);
    check_finite(buf, path);
  };
  PathBundle bundle(grid, n_paths, seed, spec.family(), spec.components(), std::move(gen), spec);
  return storage == Storage::Materialized ? bundle.materialize() : bundle;
}

double restart_terminal(const ProcessSpec& spec, const TimeGrid& grid, std::uint64_t seed, std::size_t path_index,
                        const PathBuffer& path, std::size_t from, std::uint32_t restart, std::size_t component,
                        PathBuffer& work) {
  const std::size_t n = grid.n_steps();
  if (from >= n) return path.component(component)[n];
  if (const auto* g = spec.get_if<Gbm>()) {
    // Exact jump; only X, S, W, Y, QV at T are meaningful afterwards.
    NormalStream stream(StreamId{seed, path_index, restart_component(0, restart)});
    const double tau = grid.horizon() - grid.time(from);
    const double dw = std::sqrt(tau) * stream.next();
    const double w_t = path.component(0)[from] + dw;
    switch (component) {
      case 0: return w_t;
      case 1: return g->sigma * w_t;
      case 2: return g->sigma * g->sigma * grid.horizon();
      default: {
        const double x_t = path.component(3)[from] + g->sigma * dw + (g->lambda - 0.5 * g->sigma * g->sigma) * tau;
        return component == 3 ? x_t : std::exp(x_t);
      }
    }
  }
  if (work.n_points() != path.n_points() || work.n_components() != path.n_components()) {
    work = PathBuffer(path.n_components(), path.n_points());
  }
  for (std::size_t c = 0; c < path.n_components(); ++c) {
    std::copy(path.component(c).begin(), path.component(c).end(), work.component(c).begin());
  }
  advance(spec, grid, seed, path_index, from, restart + 1, work);
  const double v = work.component(component)[n];
  if (!std::isfinite(v)) throw SimulationFailure(path_index, "non-finite value in restart");
  return v;
}

}  // namespace sympath
