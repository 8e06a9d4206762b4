#include <algorithm>
#include <cmath>
#include <numeric>

#include "harness_detail.hpp"
#include "sympath/error.hpp"
#include "sympath/json_io.hpp"
#include "sympath/parallel.hpp"
#include "sympath/stochastic_calc.hpp"

namespace sympath {

using detail::add_compare;
using detail::npos;

namespace {

// An integrand on the grid, stored as constant runs when it is a step
// function so that int lambda dX costs one pass over the runs.
struct GridFn {
  std::vector<double> values;
  std::vector<std::size_t> run_begin;  // empty: no run structure
  std::vector<double> run_value;
};

GridFn grid_fn(const DeterministicFn& f, const TimeGrid& grid) {
  GridFn g;
  g.values = f.on_grid(grid);
  const std::size_t n = g.values.size();
  std::vector<std::size_t> begins;
  for (std::size_t i = 0; i < n; ++i)
    if (i == 0 || g.values[i] != g.values[i - 1]) begins.push_back(i);
  if (begins.size() * 8 <= n) {
    g.run_begin = std::move(begins);
    for (auto b : g.run_begin) g.run_value.push_back(g.values[b]);
  }
  return g;
}

std::vector<GridFn> grid_fns(const std::vector<DeterministicFn>& fns, const TimeGrid& grid) {
  std::vector<GridFn> out;
  for (const auto& f : fns) out.push_back(grid_fn(f, grid));
  return out;
}

// sum_i f[i] dx[i]; `prefix` holds the running sums of dx (n + 1 entries).
double integrate(const GridFn& f, std::span<const double> dx, std::span<const double> prefix) {
  if (!f.run_begin.empty()) {
    double s = 0.0;
    for (std::size_t r = 0; r < f.run_begin.size(); ++r) {
      const std::size_t b = f.run_begin[r];
      const std::size_t e = r + 1 < f.run_begin.size() ? f.run_begin[r + 1] : dx.size();
      s += f.run_value[r] * (prefix[e] - prefix[b]);
    }
    return s;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) s += f.values[i] * dx[i];
  return s;
}

void running_sum(std::span<const double> dx, std::vector<double>& prefix) {
  prefix.resize(dx.size() + 1);
  prefix[0] = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) prefix[i + 1] = prefix[i] + dx[i];
}

void require_zero_start(std::span<const double> y, std::size_t path, const char* what) {
  if (y[0] != 0.0) throw InvalidData(std::string(what) + ": Y_0 must be 0 (path " + std::to_string(path) + ")");
}

// Per path: for each phi, X^phi_T followed by int lambda_j dX^phi for each j.
FeatureTable phi_features(const PathBundle& bundle, std::size_t y, std::size_t qv, const std::vector<GridFn>& phis,
                          const std::vector<GridFn>& lambdas, const char* what) {
  const std::size_t n = bundle.grid().n_steps();
  const std::size_t stride = 1 + lambdas.size();
  return extract_features(bundle, phis.size() * stride, [&](std::size_t p, const PathBuffer& buf, std::span<double> row) {
    const auto yv = buf.component(y);
    require_zero_start(yv, p, what);
    thread_local std::vector<double> dx, prefix;
    dx.resize(n);
    for (std::size_t k = 0; k < phis.size(); ++k) {
      phi_log_increments(phis[k].values, yv, qv == npos ? std::span<const double>{} : buf.component(qv), dx);
      running_sum(dx, prefix);
      row[k * stride] = prefix[n];
      for (std::size_t j = 0; j < lambdas.size(); ++j) row[k * stride + 1 + j] = integrate(lambdas[j], dx, prefix);
    }
  });
}

std::vector<double> column_scaled(const FeatureTable& t, std::size_t col, double scale) {
  std::vector<double> v = t.column(col);
  for (double& x : v) x *= scale;
  return v;
}

nlohmann::json phi_params(const std::string& y, const std::vector<DeterministicFn>& phis, std::size_t qv,
                          const PathBundle& bundle) {
  return {{"component", y},
          {"phi", detail::fn_names(phis)},
          {"qv", qv == npos ? std::string("realized") : bundle.components()[qv]}};
}

// Q^phi side of a row. With the compensator in X^phi the raw density
// E(int phi dY)_T has mean exactly 1, and the plain mean of density * b is
// much better calibrated than the ratio estimator under heavy-tailed
// weights. Realized [Y] keeps the ratio form.
class QphiSide {
 public:
  QphiSide(const MeasureWeight& w, bool raw) : w_(w), raw_(raw && std::isfinite(w.normalization())) {
    if (raw_) scaled_.resize(w.size());
  }

  void compare(TestReport& r, std::string id, std::span<const double> a, std::span<const double> b) {
    if (!raw_) return add_compare(r, std::move(id), a, b, {}, w_.weights);
    const double c = w_.normalization();
    for (std::size_t i = 0; i < b.size(); ++i) scaled_[i] = w_.weights[i] * c * b[i];
    add_compare(r, std::move(id), a, scaled_);
  }

  bool raw() const noexcept { return raw_; }

 private:
  const MeasureWeight& w_;
  bool raw_;
  std::vector<double> scaled_;
};

}  // namespace

TestReport process_symmetry_test(const PathBundle& bundle, const std::string& x,
                                 const std::vector<DeterministicFn>& thetas, const HarnessOptions& opts) {
  SYMPATH_REQUIRE(!thetas.empty(), "process_symmetry_test: empty theta family");
  const std::size_t comp = bundle.component_index(x);
  TestReport r = detail::start_report("process_symmetry", bundle, opts,
                                      {{"component", x}, {"theta", detail::fn_names(thetas)}});
  const auto th = grid_fns(thetas, bundle.grid());
  const std::size_t n = bundle.grid().n_steps();
  const FeatureTable J = extract_features(bundle, th.size(), [&](std::size_t, const PathBuffer& buf, std::span<double> row) {
    const auto v = buf.component(comp);
    thread_local std::vector<double> dx, prefix;
    dx.resize(n);
    for (std::size_t i = 0; i < n; ++i) dx[i] = v[i + 1] - v[i];
    running_sum(dx, prefix);
    for (std::size_t k = 0; k < th.size(); ++k) row[k] = integrate(th[k], dx, prefix);
  });
  const std::size_t N = bundle.n_paths();
  std::vector<double> a(N), b(N);
  for (std::size_t k = 0; k < th.size(); ++k) {
    const std::string id = "theta=" + thetas[k].name();
    for (std::size_t i = 0; i < N; ++i) a[i] = b[i] = std::cos(J(i, k));
    add_compare(r, id + "|re", a, b);
    for (std::size_t i = 0; i < N; ++i) {
      a[i] = std::sin(J(i, k));
      b[i] = std::sin(-J(i, k));
    }
    add_compare(r, id + "|im", a, b);
  }
  r.finalize();
  return r;
}

TestReport strong_self_duality_test(const PathBundle& bundle, const std::string& y,
                                    const std::vector<DeterministicFn>& phis,
                                    const std::vector<DeterministicFn>& lambdas, const PhiOptions& popts,
                                    const HarnessOptions& opts) {
  SYMPATH_REQUIRE(!phis.empty() && !lambdas.empty(), "strong_self_duality_test: empty family");
  const std::size_t yi = bundle.component_index(y);
  const std::size_t qv = detail::resolve_qv(bundle, y, popts);
  auto params = phi_params(y, phis, qv, bundle);
  params["lambda"] = detail::fn_names(lambdas);
  TestReport r = detail::start_report("strong_self_duality", bundle, opts, std::move(params));
  const auto F = phi_features(bundle, yi, qv, grid_fns(phis, bundle.grid()), grid_fns(lambdas, bundle.grid()),
                              "strong_self_duality_test");
  const std::size_t N = bundle.n_paths(), stride = 1 + lambdas.size();
  std::vector<double> a(N), b(N);
  nlohmann::json ess = nlohmann::json::object(), norm = nlohmann::json::object();
  bool raw = true;
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const auto logw = F.column(k * stride);
    const MeasureWeight w = weights_from_log("Qphi(" + phis[k].name() + ")", logw);
    ess[phis[k].name()] = w.effective_sample_size();
    norm[phis[k].name()] = w.normalization();
    QphiSide q(w, qv != npos);
    raw = raw && q.raw();
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const std::string id = "phi=" + phis[k].name() + "|lambda=" + lambdas[j].name();
      const std::size_t col = k * stride + 1 + j;
      for (std::size_t i = 0; i < N; ++i) a[i] = b[i] = std::cos(F(i, col));
      q.compare(r, id + "|re", a, b);
      for (std::size_t i = 0; i < N; ++i) {
        a[i] = std::sin(F(i, col));
        b[i] = std::sin(-F(i, col));
      }
      q.compare(r, id + "|im", a, b);
    }
  }
  r.extras["effective_sample_size"] = ess;
  r.extras["weight_mean"] = norm;
  r.extras["qphi_estimator"] = raw ? "unnormalized" : "ratio";
  r.finalize();
  return r;
}

TestReport hphi_symmetry_test(const PathBundle& bundle, const std::string& y, const std::vector<DeterministicFn>& phis,
                              const std::vector<DeterministicFn>& lambdas, const PhiOptions& popts,
                              const HarnessOptions& opts) {
  SYMPATH_REQUIRE(!phis.empty() && !lambdas.empty(), "hphi_symmetry_test: empty family");
  const std::size_t yi = bundle.component_index(y);
  const std::size_t qv = detail::resolve_qv(bundle, y, popts);
  auto params = phi_params(y, phis, qv, bundle);
  params["lambda"] = detail::fn_names(lambdas);
  TestReport r = detail::start_report("hphi_symmetry", bundle, opts, std::move(params));
  const auto F = phi_features(bundle, yi, qv, grid_fns(phis, bundle.grid()), grid_fns(lambdas, bundle.grid()),
                              "hphi_symmetry_test");
  const std::size_t N = bundle.n_paths(), stride = 1 + lambdas.size();
  std::vector<double> a(N), b(N);
  for (std::size_t k = 0; k < phis.size(); ++k) {
    const MeasureWeight w = weights_from_log("Hphi(" + phis[k].name() + ")", column_scaled(F, k * stride, 0.5));
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      const std::size_t col = k * stride + 1 + j;
      for (std::size_t i = 0; i < N; ++i) {
        a[i] = std::sin(F(i, col));
        b[i] = std::sin(-F(i, col));
      }
      add_compare(r, "phi=" + phis[k].name() + "|lambda=" + lambdas[j].name() + "|im", a, b, w.weights, w.weights);
    }
  }
  r.finalize();
  return r;
}

namespace {

// Weighted Cramer-von Mises distance between the empirical law of x under
// unit weights and under w, integrated against the unweighted law.
double cvm_distance(std::span<const double> x, std::span<const double> w) {
  const std::size_t n = x.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  const double wsum = pairwise_sum(w);
  double fp = 0.0, fq = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    double dp = 0.0, dq = 0.0;
    while (j < n && x[idx[j]] == x[idx[i]]) {
      dp += 1.0;
      dq += w[idx[j]];
      ++j;
    }
    fp += dp / static_cast<double>(n);
    fq += dq / wsum;
    acc += dp * (fp - fq) * (fp - fq);
    i = j;
  }
  return acc / static_cast<double>(n);
}

}  // namespace

TestReport ocone_qv_law_test(const PathBundle& bundle, const std::string& y, const std::vector<DeterministicFn>& phis,
                             const std::vector<double>& checkpoints, const PhiOptions& popts,
                             const HarnessOptions& opts) {
  SYMPATH_REQUIRE(!phis.empty() && !checkpoints.empty(), "ocone_qv_law_test: empty family");
  const TimeGrid& grid = bundle.grid();
  const std::size_t n = grid.n_steps();
  std::vector<std::size_t> cidx;
  for (double t : checkpoints) cidx.push_back(grid.index_at_or_before(t));
  const std::size_t yi = bundle.component_index(y);
  const std::size_t qv = detail::resolve_qv(bundle, y, popts);
  auto params = phi_params(y, phis, qv, bundle);
  params["checkpoints"] = checkpoints;
  TestReport r = detail::start_report("ocone_qv_law", bundle, opts, std::move(params));

  const auto ph = grid_fns(phis, grid);
  const std::size_t K = cidx.size();
  const FeatureTable F = extract_features(bundle, K + ph.size(), [&](std::size_t p, const PathBuffer& buf, std::span<double> row) {
    const auto yv = buf.component(yi);
    require_zero_start(yv, p, "ocone_qv_law_test");
    if (qv != npos) {
      const auto q = buf.component(qv);
      for (std::size_t j = 0; j < K; ++j) row[j] = q[cidx[j]] - q[0];
    } else {
      double acc = 0.0;
      std::size_t j = 0;
      for (std::size_t i = 0; i <= n && j < K; ++i) {
        while (j < K && cidx[j] == i) row[j++] = acc;
        if (i < n) acc += (yv[i + 1] - yv[i]) * (yv[i + 1] - yv[i]);
      }
    }
    thread_local std::vector<double> dx;
    dx.resize(n);
    for (std::size_t k = 0; k < ph.size(); ++k) {
      phi_log_increments(ph[k].values, yv, qv == npos ? std::span<const double>{} : buf.component(qv), dx);
      double s = 0.0;
      for (double d : dx) s += d;
      row[K + k] = s;
    }
  });

  const std::size_t N = bundle.n_paths();
  std::vector<std::vector<double>> q(K);
  std::vector<double> scale(K), median(K);
  for (std::size_t j = 0; j < K; ++j) {
    q[j] = F.column(j);
    const double m = pairwise_sum(q[j]) / static_cast<double>(N);
    scale[j] = m > 0.0 ? m : 1.0;
    std::vector<double> sorted = q[j];
    std::nth_element(sorted.begin(), sorted.begin() + N / 2, sorted.end());
    median[j] = sorted[N / 2];
  }
  std::vector<double> joint(N, 0.0);
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t i = 0; i < N; ++i) joint[i] += q[j][i] / (static_cast<double>(K) * scale[j]);

  std::vector<double> a(N);
  bool raw = true;
  nlohmann::json cvm = nlohmann::json::object();
  for (std::size_t k = 0; k < ph.size(); ++k) {
    const MeasureWeight w = weights_from_log("Qphi(" + phis[k].name() + ")", F.column(K + k));
    QphiSide qs(w, qv != npos);
    raw = raw && qs.raw();
    const std::string pre = "phi=" + phis[k].name() + "|";
    const auto cf_rows = [&](const std::string& id, std::span<const double> v, double u) {
      for (std::size_t i = 0; i < N; ++i) a[i] = std::cos(u * v[i]);
      qs.compare(r, id + "|re", a, a);
      for (std::size_t i = 0; i < N; ++i) a[i] = std::sin(u * v[i]);
      qs.compare(r, id + "|im", a, a);
    };
    nlohmann::json cv = nlohmann::json::object();
    for (std::size_t j = 0; j < K; ++j) {
      const std::string t = "t=" + fmt(checkpoints[j]);
      for (double u : {1.0, 2.0}) cf_rows(pre + t + "|u=" + fmt(u) + "/m", q[j], u / scale[j]);
      for (std::size_t i = 0; i < N; ++i) a[i] = q[j][i] <= median[j] ? 1.0 : 0.0;
      qs.compare(r, pre + t + "|cdf@median", a, a);
      cv[t] = cvm_distance(q[j], w.weights);
    }
    cf_rows(pre + "joint", joint, 1.0);
    cvm[phis[k].name()] = cv;
  }
  r.extras["cvm"] = cvm;
  r.extras["qphi_estimator"] = raw ? "unnormalized" : "ratio";
  r.extras["qv_scale"] = scale;
  r.finalize();
  return r;
}

}  // namespace sympath
