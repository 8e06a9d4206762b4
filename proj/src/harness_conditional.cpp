#include <algorithm>
#include <cmath>

#include "harness_detail.hpp"
#include "sympath/error.hpp"
#include "sympath/json_io.hpp"

namespace sympath {

using detail::add_compare;

namespace {

std::vector<double> log_ratios(const detail::Stopped& st, const char* what) {
  std::vector<double> l(st.at_T.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!(st.at_tau[i] > 0.0) || !(st.at_T[i] > 0.0))
      throw InvalidData(std::string(what) + ": nonpositive price on path " + std::to_string(i));
    l[i] = std::log(st.at_T[i] / st.at_tau[i]);
  }
  return l;
}

// exp(a l) cos(b l) and exp(a l) sin(b l) times g, for p = a + ib.
void power_parts(std::span<const double> l, std::span<const double> g, double a, double b, std::vector<double>& re,
                 std::vector<double>& im) {
  re.resize(l.size());
  im.resize(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double m = g[i] * std::exp(a * l[i]);
    re[i] = m * std::cos(b * l[i]);
    im[i] = m * std::sin(b * l[i]);
  }
}

void moment_rows(TestReport& r, const std::string& prefix, std::span<const double> l, const Multipliers& g,
                 const std::vector<std::complex<double>>& p_grid, std::span<const double> w) {
  std::vector<double> lre, lim, rre, rim;
  for (const auto& p : p_grid) {
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      power_parts(l, g.values[k], p.real(), p.imag(), lre, lim);
      power_parts(l, g.values[k], 1.0 - p.real(), -p.imag(), rre, rim);
      const std::string id = prefix + "p=" + detail::p_label(p) + "|g=" + g.names[k];
      add_compare(r, id + "|re", lre, rre, w, w);
      add_compare(r, id + "|im", lim, rim, w, w);
    }
  }
}

void check_weight(const PathBundle& bundle, const MeasureWeight* weight) {
  if (weight) SYMPATH_REQUIRE(weight->size() == bundle.n_paths(), "weight is not aligned with the bundle");
}

std::span<const double> weight_span(const MeasureWeight* w) {
  return w ? std::span<const double>(w->weights) : std::span<const double>{};
}

}  // namespace

std::vector<std::complex<double>> default_p_grid() {
  std::vector<std::complex<double>> out;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double b : {0.0, 0.5, 1.0, 2.0}) out.emplace_back(a, b);
  return out;
}

TestReport conditional_symmetry_test(const PathBundle& bundle, const std::string& m, const StoppingRule& rule,
                                     const TestFunctionFamily& fam, const MeasureWeight* weight,
                                     const HarnessOptions& opts) {
  check_weight(bundle, weight);
  SYMPATH_REQUIRE(!fam.payoffs.empty(), "conditional_symmetry_test: empty payoff family");
  const std::size_t comp = bundle.component_index(m);
  TestReport r = detail::start_report(
      "conditional_symmetry", bundle, opts,
      {{"component", m}, {"rule", to_json(rule)}, {"payoffs", detail::payoff_names(fam.payoffs)},
       {"conditioning", detail::conditioning_json(fam.conditioning)}, {"weight", weight ? weight->label : "P"}});
  const auto st = detail::stopped_values(bundle, comp, rule, fam.conditioning);
  const Multipliers g = make_multipliers(st.stat, fam.conditioning);
  detail::note_bins(r, g, fam.conditioning);

  const std::size_t n = bundle.n_paths();
  std::vector<double> a(n), b(n);
  for (const auto& f : fam.payoffs) {
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const double d = st.at_T[i] - st.at_tau[i];
        a[i] = g.values[k][i] * f(d);
        b[i] = g.values[k][i] * f(-d);
      }
      add_compare(r, "f=" + f.name() + "|g=" + g.names[k], a, b, weight_span(weight), weight_span(weight));
    }
  }
  r.finalize();
  return r;
}

TestReport self_duality_moment_test(const PathBundle& bundle, const std::string& s, const StoppingRule& rule,
                                    const std::vector<std::complex<double>>& p_grid, const Conditioning& cond,
                                    const MeasureWeight* weight, const HarnessOptions& opts) {
  detail::check_p_grid(p_grid);
  check_weight(bundle, weight);
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : p_grid) ps.push_back(detail::p_label(p));
  TestReport r = detail::start_report("self_duality_moment", bundle, opts,
                                      {{"component", s}, {"rule", to_json(rule)}, {"p_grid", ps},
                                       {"conditioning", detail::conditioning_json(cond)},
                                       {"weight", weight ? weight->label : "P"}});
  const auto st = detail::stopped_values(bundle, bundle.component_index(s), rule, cond);
  const auto l = log_ratios(st, "self_duality_moment_test");
  const Multipliers g = make_multipliers(st.stat, cond);
  detail::note_bins(r, g, cond);
  moment_rows(r, "", l, g, p_grid, weight_span(weight));
  r.finalize();
  return r;
}

TestReport pw_symmetry_test(const PathBundle& bundle, const std::string& x, const StoppingRule& rule, double w,
                            const TestFunctionFamily& fam, const HarnessOptions& opts) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("pw_symmetry_test: w must lie in [0, 1]");
  SYMPATH_REQUIRE(!fam.payoffs.empty(), "pw_symmetry_test: empty payoff family");
  TestReport r = detail::start_report("pw_symmetry", bundle, opts,
                                      {{"component", x}, {"rule", to_json(rule)}, {"w", w},
                                       {"payoffs", detail::payoff_names(fam.payoffs)},
                                       {"conditioning", detail::conditioning_json(fam.conditioning)}});
  const auto st = detail::stopped_values(bundle, bundle.component_index(x), rule, fam.conditioning);
  const Multipliers g = make_multipliers(st.stat, fam.conditioning);
  detail::note_bins(r, g, fam.conditioning);

  const std::size_t n = bundle.n_paths();
  std::vector<double> d(n), wl(n), wr(n);
  double max_exp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = st.at_T[i] - st.at_tau[i];
    max_exp = std::max(max_exp, std::abs(d[i]));
  }
  if (!std::isfinite(max_exp) || max_exp > 700.0) throw WeightOverflow(max_exp, "pw_symmetry_test: tilt overflow");
  for (std::size_t i = 0; i < n; ++i) {
    wl[i] = std::exp(w * d[i]);
    wr[i] = std::exp((1.0 - w) * d[i]);
  }
  std::vector<double> a(n), b(n);
  for (const auto& f : fam.payoffs) {
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = g.values[k][i] * f(d[i]);
        b[i] = g.values[k][i] * f(-d[i]);
      }
      add_compare(r, "f=" + f.name() + "|g=" + g.names[k], a, b, wl, wr);
    }
  }
  r.finalize();
  return r;
}

TestReport quasi_self_duality_test(const PathBundle& bundle, const std::string& s, double alpha,
                                   const StoppingRule& rule, const TestFunctionFamily& fam, const QuasiOptions& qopts,
                                   const HarnessOptions& opts) {
  SYMPATH_REQUIRE(std::isfinite(alpha), "quasi_self_duality_test: alpha must be finite");
  if (std::abs(alpha) > qopts.max_abs_alpha)
    throw WeightOverflow(alpha, "quasi_self_duality_test: alpha outside the safe range");
  SYMPATH_REQUIRE(!fam.payoffs.empty(), "quasi_self_duality_test: empty payoff family");
  if (alpha != 0.0) detail::check_p_grid(qopts.p_grid);
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : qopts.p_grid) ps.push_back(detail::p_label(p));
  TestReport r = detail::start_report("quasi_self_duality", bundle, opts,
                                      {{"component", s}, {"alpha", alpha}, {"rule", to_json(rule)},
                                       {"payoffs", detail::payoff_names(fam.payoffs)}, {"p_grid", ps},
                                       {"conditioning", detail::conditioning_json(fam.conditioning)}});
  const auto st = detail::stopped_values(bundle, bundle.component_index(s), rule, fam.conditioning);
  const auto l = log_ratios(st, "quasi_self_duality_test");
  const Multipliers g = make_multipliers(st.stat, fam.conditioning);
  detail::note_bins(r, g, fam.conditioning);

  const std::size_t n = l.size();
  double max_exp = 0.0;
  for (double v : l) max_exp = std::max(max_exp, std::abs(alpha * v));
  if (max_exp > 700.0) throw WeightOverflow(max_exp, "quasi_self_duality_test: r^alpha overflows");

  std::vector<double> ra(n), a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) ra[i] = std::exp(alpha * l[i]);

  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const auto& gk = g.values[k];
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = gk[i] * ra[i];
      b[i] = gk[i];
    }
    add_compare(r, "norm|g=" + g.names[k], a, b);
  }
  for (const auto& f : fam.payoffs) {
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      const auto& gk = g.values[k];
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = gk[i] * f(l[i]);
        b[i] = gk[i] * ra[i] * f(-l[i]);
      }
      add_compare(r, "dual|f=" + f.name() + "|g=" + g.names[k], a, b);
    }
  }

  if (alpha == 0.0) {
    r.notes.push_back("alpha = 0: dual rows are the conditional symmetry of log S");
  } else {
    // Same identity read as self-duality of S^alpha: log ratio l' = alpha l,
    // payoff f(l'/alpha), dual weight e^{l'}.
    std::vector<double> lp(n);
    for (std::size_t i = 0; i < n; ++i) lp[i] = alpha * l[i];
    double route_diff = 0.0;
    for (const auto& f : fam.payoffs) {
      for (std::size_t k = 0; k < g.values.size(); ++k) {
        const auto& gk = g.values[k];
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = gk[i] * f(lp[i] / alpha);
          b[i] = gk[i] * std::exp(lp[i]) * f(-lp[i] / alpha);
        }
        const std::string suffix = "f=" + f.name() + "|g=" + g.names[k];
        add_compare(r, "pow|" + suffix, a, b);
        const ReportRow* d = r.find("dual|" + suffix);
        const ReportRow& p = r.rows.back();
        const double scale = std::max({1.0, std::abs(d->lhs), std::abs(d->rhs)});
        route_diff = std::max({route_diff, std::abs(d->lhs - p.lhs) / scale, std::abs(d->rhs - p.rhs) / scale});
      }
    }
    r.extras["route_max_abs_diff"] = route_diff;
    moment_rows(r, "moment|", lp, g, qopts.p_grid, {});
  }
  r.finalize();
  return r;
}

}  // namespace sympath
