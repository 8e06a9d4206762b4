#include "sympath/measure_weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sympath/error.hpp"
#include "sympath/parallel.hpp"
#include "sympath/stochastic_calc.hpp"

namespace sympath {

double MeasureWeight::normalization() const { return std::exp(log_normalization); }

double MeasureWeight::effective_sample_size() const {
  std::vector<double> sq(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) sq[i] = weights[i] * weights[i];
  const double s = pairwise_sum(weights);
  return s * s / pairwise_sum(sq);
}

std::string measure_label(const WeightRequest& req) {
  switch (req.kind) {
    case MeasureKind::P: return "P";
    case MeasureKind::Q: return "Q";
    case MeasureKind::Pw: return "Pw(" + std::to_string(req.w) + ")";
    case MeasureKind::H: return "H";
    case MeasureKind::Qphi: return "Qphi(" + (req.phi ? req.phi->name() : std::string("?")) + ")";
    case MeasureKind::Hphi: return "Hphi(" + (req.phi ? req.phi->name() : std::string("?")) + ")";
  }
  return "?";
}

MeasureWeight weights_from_log(std::string label, std::span<const double> log_weights) {
  SYMPATH_REQUIRE(!log_weights.empty(), "weights: empty sample");
  double max_lw = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (!std::isfinite(lw)) {
      double shown = lw;
      for (double v : log_weights)
        if (std::isfinite(v)) shown = std::max(shown, v);
      throw WeightOverflow(lw, "non-finite log-weight in measure " + label + "; largest finite exponent " +
                                   std::to_string(shown));
    }
    max_lw = std::max(max_lw, lw);
  }
  MeasureWeight out;
  out.label = std::move(label);
  out.max_log_weight = max_lw;
  out.weights.resize(log_weights.size());
  for (std::size_t i = 0; i < log_weights.size(); ++i) out.weights[i] = std::exp(log_weights[i] - max_lw);
  const double mean = pairwise_sum(out.weights) / static_cast<double>(out.weights.size());
  for (double& w : out.weights) w /= mean;
  out.log_normalization = max_lw + std::log(mean);
  return out;
}

std::pair<std::size_t, std::size_t> resolve_phi_components(const PathBundle& bundle, const WeightRequest& req) {
  std::string driver = req.driver;
  if (driver.empty()) {
    SYMPATH_REQUIRE(bundle.spec().has_value(), "weights: driver component required for non-catalog bundles");
    driver = bundle.spec()->martingale_component();
  }
  const std::size_t y = bundle.component_index(driver);
  const std::size_t qv = (!req.qv.empty() && bundle.has_component(req.qv)) ? bundle.component_index(req.qv)
                                                                             : static_cast<std::size_t>(-1);
  return {y, qv};
}

MeasureWeight make_weight(const PathBundle& bundle, const WeightRequest& req) {
  const std::size_t n = bundle.grid().n_steps();
  const std::string label = measure_label(req);
  std::vector<double> log_w(bundle.n_paths(), 0.0);

  switch (req.kind) {
    case MeasureKind::P: break;
    case MeasureKind::Q:
    case MeasureKind::Pw:
    case MeasureKind::H: {
      const double w = req.kind == MeasureKind::Q ? 1.0 : (req.kind == MeasureKind::H ? 0.5 : req.w);
      SYMPATH_REQUIRE(w >= 0.0 && w <= 1.0, "weights: w must lie in [0, 1]");
      const std::size_t s = bundle.component_index(req.price);
      for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) {
        const auto path = buf.component(s);
        if (!(path[0] > 0.0) || !(path[n] > 0.0)) {
          throw InvalidData("weights: nonpositive price on path " + std::to_string(p));
        }
        log_w[p] = w * std::log(path[n] / path[0]);
      });
      break;
    }
    case MeasureKind::Qphi:
    case MeasureKind::Hphi: {
      SYMPATH_REQUIRE(req.phi.has_value(), "weights: phi required for Qphi/Hphi");
      const auto [y, qv] = resolve_phi_components(bundle, req);
      const auto phi = req.phi->on_grid(bundle.grid());
      const double scale = req.kind == MeasureKind::Qphi ? 1.0 : 0.5;
      const bool realized = qv == static_cast<std::size_t>(-1);
      for_each_path(bundle, [&](std::size_t p, const PathBuffer& buf) {
        std::vector<double> dx(n);
        phi_log_increments(phi, buf.component(y), realized ? std::span<const double>{} : buf.component(qv), dx);
        log_w[p] = scale * pairwise_sum(dx);
      });
      break;
    }
  }
  MeasureWeight out = weights_from_log(label, log_w);
  if (req.kind == MeasureKind::P) {
    std::fill(out.weights.begin(), out.weights.end(), 1.0);
    out.log_normalization = 0.0;
  }
  return out;
}

}  // namespace sympath
