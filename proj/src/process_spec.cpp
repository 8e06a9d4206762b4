#include "sympath/process_spec.hpp"

#include <cmath>

#include "sympath/error.hpp"

namespace sympath {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string("process.") + field + " must be finite");
}

}  // namespace

std::string ProcessSpec::family() const {
  return std::visit(overloaded{[](const Gbm&) { return std::string("GBM"); },
                               [](const OconeSv&) { return std::string("OconeSV"); },
                               [](const CubicBm&) { return std::string("CubicBM"); },
                               [](const LevyArea&) { return std::string("LevyArea"); },
                               [](const QsdLift&) { return std::string("QSDLift"); }},
                    v_);
}

void ProcessSpec::validate() const {
  std::visit(overloaded{[](const Gbm& g) {
                          require_finite(g.sigma, "sigma");
                          require_finite(g.lambda, "lambda");
                          require_finite(g.s0, "s0");
                          if (!(g.sigma > 0.0)) throw InvalidArgument("process.sigma must be > 0");
                          if (!(g.s0 > 0.0)) throw InvalidArgument("process.s0 must be > 0");
                        },
                        [](const OconeSv& o) {
                          require_finite(o.mu, "mu");
                          require_finite(o.v0, "v0");
                          if (!(o.mu > 0.0)) throw InvalidArgument("process.mu must be > 0");
                          if (!(o.v0 >= 0.0)) throw InvalidArgument("process.v0 must be >= 0");
                        },
                        [](const CubicBm&) {}, [](const LevyArea&) {},
                        [](const QsdLift& q) {
                          require_finite(q.kappa, "kappa");
                          if (!q.base) throw InvalidArgument("process.base is required for QSDLift");
                          if (q.base->get_if<QsdLift>()) {
                            throw InvalidArgument("process.base must be a martingale family, not QSDLift");
                          }
                          q.base->validate();
                        }},
             v_);
}

std::vector<std::string> ProcessSpec::components() const {
  return std::visit(overloaded{[](const Gbm&) { return std::vector<std::string>{"W", "Y", "QV", "X", "S"}; },
                               [](const OconeSv&) {
                                 return std::vector<std::string>{"B", "W", "V", "M", "QV", "X", "S"};
                               },
                               [](const CubicBm&) { return std::vector<std::string>{"B", "M", "QV", "X", "S"}; },
                               [](const LevyArea&) {
                                 return std::vector<std::string>{"B1", "B2", "A", "QV", "X", "S"};
                               },
                               [](const QsdLift& q) { return q.base->components(); }},
                    v_);
}

std::string ProcessSpec::martingale_component() const {
  return std::visit(overloaded{[](const Gbm&) { return std::string("Y"); },
                               [](const OconeSv&) { return std::string("M"); },
                               [](const CubicBm&) { return std::string("M"); },
                               [](const LevyArea&) { return std::string("A"); },
                               [](const QsdLift& q) { return q.base->martingale_component(); }},
                    v_);
}

unsigned ProcessSpec::n_drivers() const {
  return std::visit(overloaded{[](const Gbm&) { return 1u; }, [](const OconeSv&) { return 2u; },
                               [](const CubicBm&) { return 1u; }, [](const LevyArea&) { return 2u; },
                               [](const QsdLift& q) { return q.base->n_drivers(); }},
                    v_);
}

double ProcessSpec::initial_price() const {
  if (const auto* g = get_if<Gbm>()) return g->s0;
  return 1.0;
}

ProcessSpec make_qsd_lift(ProcessSpec base, double kappa) {
  return ProcessSpec(QsdLift{std::make_shared<const ProcessSpec>(std::move(base)), kappa});
}

}  // namespace sympath
