#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace sympath {

class ProcessSpec;

/// S_t = s0 exp(sigma W_t - sigma^2 t / 2 + lambda t).
struct Gbm {
  double sigma = 0.2;
  double lambda = 0.0;
  double s0 = 1.0;
};

/// dM = V dB, dV = -mu V dt + sqrt(V) dW with B independent of W.
struct OconeSv {
  double mu = 1.0;
  double v0 = 1.0;
};

/// M = int B^2 dB.
struct CubicBm {};

/// A = (1/2) int (B1 dB2 - B2 dB1).
struct LevyArea {};

/// S = exp(kappa [M]) E(M) for the martingale component M of `base`.
struct QsdLift {
  std::shared_ptr<const ProcessSpec> base;
  double kappa = 0.0;
};

class ProcessSpec {
 public:
  using Variant = std::variant<Gbm, OconeSv, CubicBm, LevyArea, QsdLift>;

  ProcessSpec(Gbm g) : v_(g) {}
  ProcessSpec(OconeSv o) : v_(o) {}
  ProcessSpec(CubicBm c) : v_(c) {}
  ProcessSpec(LevyArea l) : v_(l) {}
  ProcessSpec(QsdLift q) : v_(std::move(q)) {}

  const Variant& variant() const noexcept { return v_; }
  template <class T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&v_);
  }

  /// "GBM", "OconeSV", "CubicBM", "LevyArea" or "QSDLift".
  std::string family() const;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;

  /// Component names in storage order.
  std::vector<std::string> components() const;

  /// The (local) martingale whose stochastic exponential is the price:
  /// "Y" for GBM, "M" for OconeSV/CubicBM, "A" for LevyArea.
  std::string martingale_component() const;

  /// Number of independent Brownian drivers.
  unsigned n_drivers() const;

  double initial_price() const;

 private:
  Variant v_;
};

ProcessSpec make_qsd_lift(ProcessSpec base, double kappa);

/// Order alpha = 1 - 2 kappa claimed for exp(kappa [M]) E(M).
inline double qsd_order(double kappa) noexcept { return 1.0 - 2.0 * kappa; }

}  // namespace sympath
