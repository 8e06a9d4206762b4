#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sympath/deterministic_fn.hpp"
#include "sympath/path_bundle.hpp"

namespace sympath {

enum class MeasureKind {
  P,     ///< all weights 1
  Q,     ///< S_T / S_0
  Pw,    ///< S_T^w / E[S_T^w]
  H,     ///< Pw with w = 1/2
  Qphi,  ///< exp(X^phi_T) = E(int phi dY)_T
  Hphi,  ///< exp(X^phi_T / 2) / c_phi
};

struct WeightRequest {
  MeasureKind kind = MeasureKind::P;
  double w = 0.0;
  std::optional<DeterministicFn> phi{};
  std::string price = "S";
  /// Martingale Y for Qphi/Hphi; empty means the spec's martingale component.
  std::string driver{};
  /// Quadratic variation of Y used in X^phi; empty or missing means realized.
  std::string qv = "QV";
};

/// Per-path importance weights normalized to sample mean 1.
struct MeasureWeight {
  std::string label;
  std::vector<double> weights;
  /// log of the sample mean of the raw (unnormalized) weights.
  double log_normalization = 0.0;
  double max_log_weight = 0.0;

  double normalization() const;
  /// N / (1 + cv^2) = (sum w)^2 / sum w^2.
  double effective_sample_size() const;
  std::size_t size() const noexcept { return weights.size(); }
};

std::string measure_label(const WeightRequest& req);

/// Normalizes raw log-weights: subtracts the max before exponentiating.
/// Non-finite entries raise WeightOverflow.
MeasureWeight weights_from_log(std::string label, std::span<const double> log_weights);

/// Builds the Radon-Nikodym weights of the requested measure on `bundle`.
MeasureWeight make_weight(const PathBundle& bundle, const WeightRequest& req);

/// Resolves `req.driver` / `req.qv` against the bundle: returns the driver
/// component index and the qv component index (or npos for realized).
std::pair<std::size_t, std::size_t> resolve_phi_components(const PathBundle& bundle, const WeightRequest& req);

}  // namespace sympath
