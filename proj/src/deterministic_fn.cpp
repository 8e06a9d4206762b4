#include "sympath/deterministic_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sympath/error.hpp"

namespace sympath {
namespace {

std::string format_values(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace

DeterministicFn::DeterministicFn(Repr r, std::string name) : repr_(std::move(r)), sup_abs_(0.0), name_(std::move(name)) {
  if (const auto* c = std::get_if<Constant>(&repr_)) {
    sup_abs_ = std::abs(c->value);
  } else if (const auto* s = std::get_if<Steps>(&repr_)) {
    for (double v : s->values) sup_abs_ = std::max(sup_abs_, std::abs(v));
  } else {
    sup_abs_ = std::abs(std::get<Sine>(repr_).amplitude);
  }
  SYMPATH_REQUIRE(std::isfinite(sup_abs_), "deterministic function must be bounded");
}

DeterministicFn DeterministicFn::constant(double c) {
  std::ostringstream os;
  os << "const(" << c << ")";
  return DeterministicFn(Constant{c}, os.str());
}

DeterministicFn DeterministicFn::steps(std::vector<double> breaks, std::vector<double> values) {
  SYMPATH_REQUIRE(values.size() == breaks.size() + 1, "steps: need one more value than breakpoints");
  SYMPATH_REQUIRE(std::is_sorted(breaks.begin(), breaks.end()), "steps: breakpoints must be increasing");
  std::string name = "steps(" + format_values(breaks) + ";" + format_values(values) + ")";
  return DeterministicFn(Steps{std::move(breaks), std::move(values)}, std::move(name));
}

DeterministicFn DeterministicFn::dyadic(double horizon, std::vector<double> values) {
  SYMPATH_REQUIRE(!values.empty(), "dyadic: no values");
  std::vector<double> breaks;
  for (std::size_t k = 1; k < values.size(); ++k) {
    breaks.push_back(horizon * static_cast<double>(k) / static_cast<double>(values.size()));
  }
  std::string name = "pieces(" + format_values(values) + ")";
  return DeterministicFn(Steps{std::move(breaks), std::move(values)}, std::move(name));
}

DeterministicFn DeterministicFn::sine(int k, double horizon, double amplitude) {
  SYMPATH_REQUIRE(horizon > 0.0, "sine: horizon must be > 0");
  std::ostringstream os;
  os << (amplitude == 1.0 ? "" : std::to_string(amplitude) + "*") << "sin(" << k << "pi t/T)";
  return DeterministicFn(Sine{k, horizon, amplitude}, os.str());
}

double DeterministicFn::operator()(double t) const noexcept {
  if (const auto* c = std::get_if<Constant>(&repr_)) return c->value;
  if (const auto* s = std::get_if<Steps>(&repr_)) {
    const auto k = std::upper_bound(s->breaks.begin(), s->breaks.end(), t) - s->breaks.begin();
    return s->values[static_cast<std::size_t>(k)];
  }
  const auto& sn = std::get<Sine>(repr_);
  return sn.amplitude * std::sin(sn.k * std::numbers::pi * t / sn.horizon);
}

std::vector<double> DeterministicFn::on_grid(const TimeGrid& grid) const {
  std::vector<double> out(grid.n_steps());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(grid.time(i));
  return out;
}

DeterministicFn DeterministicFn::scaled(double factor) const {
  std::ostringstream os;
  os << factor << "*" << name_;
  if (const auto* c = std::get_if<Constant>(&repr_)) return DeterministicFn(Constant{c->value * factor}, os.str());
  if (const auto* s = std::get_if<Steps>(&repr_)) {
    Steps out = *s;
    for (double& v : out.values) v *= factor;
    return DeterministicFn(std::move(out), os.str());
  }
  Sine out = std::get<Sine>(repr_);
  out.amplitude *= factor;
  return DeterministicFn(out, os.str());
}

std::vector<DeterministicFn> default_function_family(double horizon) {
  return {
      DeterministicFn::constant(1.0),
      DeterministicFn::constant(-0.5),
      DeterministicFn::dyadic(horizon, {1.0, -1.0}),
      DeterministicFn::dyadic(horizon, {0.5, 1.0}),
      DeterministicFn::dyadic(horizon, {-1.0, 0.5}),
      DeterministicFn::dyadic(horizon, {-0.5, -1.0}),
      DeterministicFn::dyadic(horizon, {1.0, 0.5, -0.5, -1.0}),
      DeterministicFn::dyadic(horizon, {-1.0, 1.0, -1.0, 1.0}),
      DeterministicFn::dyadic(horizon, {0.5, -1.0, 1.0, -0.5}),
      DeterministicFn::dyadic(horizon, {1.0, 1.0, 0.5, 0.5}),
      DeterministicFn::sine(1, horizon),
      DeterministicFn::sine(2, horizon),
  };
}

}  // namespace sympath
