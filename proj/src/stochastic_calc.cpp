#include "sympath/stochastic_calc.hpp"

#include <cmath>

#include "sympath/error.hpp"

namespace sympath {

void ito_integral(std::span<const double> integrand, std::span<const double> y, std::span<double> out) {
  SYMPATH_REQUIRE(integrand.size() + 1 == y.size() && out.size() == y.size(), "ito_integral: shape mismatch");
  out[0] = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) out[i + 1] = out[i] + integrand[i] * (y[i + 1] - y[i]);
}

std::vector<double> ito_integral(const DeterministicFn& integrand, std::span<const double> y, const TimeGrid& grid) {
  SYMPATH_REQUIRE(y.size() == grid.size(), "ito_integral: integrator not on grid");
  std::vector<double> out(y.size());
  ito_integral(integrand.on_grid(grid), y, out);
  return out;
}

void quadratic_variation(std::span<const double> y, std::span<double> out) {
  SYMPATH_REQUIRE(out.size() == y.size() && !y.empty(), "quadratic_variation: shape mismatch");
  out[0] = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double d = y[i + 1] - y[i];
    out[i + 1] = out[i] + d * d;
  }
}

std::vector<double> quadratic_variation(std::span<const double> y) {
  std::vector<double> out(y.size());
  quadratic_variation(y, out);
  return out;
}

std::vector<double> stochastic_exponential(std::span<const double> y) {
  SYMPATH_REQUIRE(!y.empty(), "stochastic_exponential: empty path");
  if (y[0] != 0.0) throw InvalidArgument("stochastic_exponential: path must start at 0");
  std::vector<double> out = quadratic_variation(y);
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::exp(y[i] - 0.5 * out[i]);
  return out;
}

std::vector<double> build_qsd_process(std::span<const double> m, std::span<const double> qv, double kappa) {
  SYMPATH_REQUIRE(m.size() == qv.size() && !m.empty(), "build_qsd_process: shape mismatch");
  if (m[0] != 0.0) throw InvalidArgument("build_qsd_process: M must start at 0");
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = std::exp(kappa * qv[i] + m[i] - 0.5 * qv[i]);
  return out;
}

std::vector<double> build_qsd_process(std::span<const double> m, double kappa) {
  const auto qv = quadratic_variation(m);
  return build_qsd_process(m, qv, kappa);
}

void phi_log_increments(std::span<const double> phi, std::span<const double> y, std::span<const double> qv,
                        std::span<double> dx) {
  const std::size_t n = phi.size();
  SYMPATH_REQUIRE(y.size() == n + 1 && dx.size() == n, "phi_log_increments: shape mismatch");
  if (qv.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = y[i + 1] - y[i];
      dx[i] = phi[i] * d - 0.5 * phi[i] * phi[i] * d * d;
    }
    return;
  }
  SYMPATH_REQUIRE(qv.size() == n + 1, "phi_log_increments: qv not on grid");
  for (std::size_t i = 0; i < n; ++i) {
    dx[i] = phi[i] * (y[i + 1] - y[i]) - 0.5 * phi[i] * phi[i] * (qv[i + 1] - qv[i]);
  }
}

std::vector<double> phi_log_exponential(const DeterministicFn& phi, std::span<const double> y,
                                        std::span<const double> qv, const TimeGrid& grid) {
  const auto phi_grid = phi.on_grid(grid);
  std::vector<double> dx(grid.n_steps());
  phi_log_increments(phi_grid, y, qv, dx);
  std::vector<double> out(grid.size());
  out[0] = 0.0;
  for (std::size_t i = 0; i < dx.size(); ++i) out[i + 1] = out[i] + dx[i];
  return out;
}

PathBundle with_ito_integral(const PathBundle& bundle, const DeterministicFn& phi, const std::string& integrator,
                             const std::string& name) {
  const std::size_t c = bundle.component_index(integrator);
  auto phi_grid = phi.on_grid(bundle.grid());
  return bundle.with_component(name, [c, phi_grid](const PathBuffer& in, std::span<double> out) {
    ito_integral(phi_grid, in.component(c), out);
  });
}

PathBundle with_quadratic_variation(const PathBundle& bundle, const std::string& component, const std::string& name) {
  const std::size_t c = bundle.component_index(component);
  return bundle.with_component(name, [c](const PathBuffer& in, std::span<double> out) {
    quadratic_variation(in.component(c), out);
  });
}

PathBundle with_qsd_process(const PathBundle& bundle, const std::string& m, const std::string& qv, double kappa,
                            const std::string& name) {
  const std::size_t cm = bundle.component_index(m);
  const std::size_t cq = bundle.component_index(qv);
  return bundle.with_component(name, [cm, cq, kappa](const PathBuffer& in, std::span<double> out) {
    const auto s = build_qsd_process(in.component(cm), in.component(cq), kappa);
    std::copy(s.begin(), s.end(), out.begin());
  });
}

}  // namespace sympath
