#pragma once

// Pathwise discrete stochastic calculus on a grid. All sums are left-point
// (Ito) sums, so value k only depends on path values at indices <= k.

#include <span>
#include <string>
#include <vector>

#include "sympath/deterministic_fn.hpp"
#include "sympath/path_bundle.hpp"
#include "sympath/time_grid.hpp"

namespace sympath {

/// out[k] = sum_{i<k} integrand[i] (y[i+1] - y[i]); integrand has n entries.
void ito_integral(std::span<const double> integrand, std::span<const double> y, std::span<double> out);
std::vector<double> ito_integral(const DeterministicFn& integrand, std::span<const double> y, const TimeGrid& grid);

/// Realized quadratic variation: out[k] = sum_{i<k} (y[i+1] - y[i])^2.
void quadratic_variation(std::span<const double> y, std::span<double> out);
std::vector<double> quadratic_variation(std::span<const double> y);

/// exp(y - [y]/2) with the realized [y]. Requires y[0] == 0.
std::vector<double> stochastic_exponential(std::span<const double> y);

/// exp(kappa [M] + M - [M]/2); `qv` is the quadratic variation path of M.
/// Requires m[0] == 0.
std::vector<double> build_qsd_process(std::span<const double> m, std::span<const double> qv, double kappa);
/// As above with the realized quadratic variation of `m`.
std::vector<double> build_qsd_process(std::span<const double> m, double kappa);

/// Increments of X^phi = int phi dY - 1/2 int phi^2 d[Y]:
/// dx[i] = phi[i] (y[i+1]-y[i]) - phi[i]^2 (qv[i+1]-qv[i]) / 2.
void phi_log_increments(std::span<const double> phi, std::span<const double> y, std::span<const double> qv,
                        std::span<double> dx);
/// Running X^phi; `qv` empty means the realized [Y].
std::vector<double> phi_log_exponential(const DeterministicFn& phi, std::span<const double> y,
                                        std::span<const double> qv, const TimeGrid& grid);

/// Adds `name` = int phi d(integrator) to every path.
PathBundle with_ito_integral(const PathBundle& bundle, const DeterministicFn& phi, const std::string& integrator,
                             const std::string& name);
/// Adds `name` = realized [component].
PathBundle with_quadratic_variation(const PathBundle& bundle, const std::string& component, const std::string& name);
/// Adds `name` = exp(kappa [M] + M - [M]/2) from components `m` and `qv`.
PathBundle with_qsd_process(const PathBundle& bundle, const std::string& m, const std::string& qv, double kappa,
                            const std::string& name);

}  // namespace sympath
