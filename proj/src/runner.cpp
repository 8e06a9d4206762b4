#include "sympath/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sympath/error.hpp"
#include "sympath/harness.hpp"
#include "sympath/hedge.hpp"
#include "sympath/json_io.hpp"
#include "sympath/parallel.hpp"
#include "sympath/simulate.hpp"

namespace sympath {

using nlohmann::json;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& cli, const ExperimentConfig& cfg) {
  if (cli) return *cli;
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("SYMPATH_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') throw InvalidArgument("SYMPATH_SEED: expected a non-negative integer");
    return v;
  }
  return 1;
}

namespace {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text, std::vector<std::string>& files) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidArgument(p.string() + ": cannot write");
  out << text;
  files.push_back(p.string());
}

std::string get_str(const json& j, const char* key, const std::string& fallback) {
  return j.contains(key) ? j.at(key).get<std::string>() : fallback;
}

double get_num(const json& j, const char* key, double fallback) {
  return j.contains(key) ? j.at(key).get<double>() : fallback;
}

std::vector<std::complex<double>> p_grid_of(const json& j, std::vector<std::complex<double>> fallback) {
  if (!j.contains("p_grid") || j.at("p_grid") == "default") return fallback;
  std::vector<std::complex<double>> out;
  for (const auto& p : j.at("p_grid")) out.emplace_back(p[0].get<double>(), p[1].get<double>());
  return out;
}

TestFunctionFamily family_of(const json& j, const std::string& where) {
  TestFunctionFamily fam;
  if (j.contains("payoffs")) fam.payoffs = payoffs_from_json(j.at("payoffs"), where + ".payoffs");
  if (j.contains("conditioning")) fam.conditioning = conditioning_from_json(j.at("conditioning"), where + ".conditioning");
  return fam;
}

std::vector<DeterministicFn> fns_of(const json& j, const char* key, double horizon, const std::string& where) {
  return functions_from_json(j.contains(key) ? j.at(key) : json("default"), horizon, where + "." + key);
}

std::optional<MeasureWeight> weight_of(const PathBundle& bundle, const json& j, double horizon, const std::string& where) {
  if (!j.contains("weight")) return std::nullopt;
  const auto& w = j.at("weight");
  WeightRequest req;
  const auto kind = w.at("kind").get<std::string>();
  if (kind == "P") return std::nullopt;
  if (kind == "Q") req.kind = MeasureKind::Q;
  if (kind == "Pw") req.kind = MeasureKind::Pw;
  if (kind == "H") req.kind = MeasureKind::H;
  if (kind == "Qphi") req.kind = MeasureKind::Qphi;
  if (kind == "Hphi") req.kind = MeasureKind::Hphi;
  req.w = get_num(w, "w", 0.0);
  if (w.contains("phi")) req.phi = functions_from_json(json::array({w.at("phi")}), horizon, where + ".weight.phi")[0];
  return make_weight(bundle, req);
}

struct Outcome {
  json report;
  const TestReport* rows = nullptr;  // for CSV
  bool pass = true;
  bool informational = false;
  double max_abs_z = 0.0;
  std::string worst_row;
};

TestReport run_test(const TestInvocation& t, const PathBundle& bundle, const ExperimentConfig& cfg, json& extra,
                    bool& informational) {
  const json& j = t.params;
  const std::string where = "tests." + t.name;
  HarnessOptions ho;
  ho.z_star = get_num(j, "z_star", 4.0);
  const double T = cfg.horizon;
  const std::string martingale = cfg.process.martingale_component();
  const auto rule = [&]() { return stopping_rule_from_json(j.at("rule"), where + ".rule"); };

  if (t.type == "conditional_symmetry") {
    const auto w = weight_of(bundle, j, T, where);
    return conditional_symmetry_test(bundle, get_str(j, "component", martingale), rule(), family_of(j, where),
                                     w ? &*w : nullptr, ho);
  }
  if (t.type == "self_duality_moment") {
    const auto w = weight_of(bundle, j, T, where);
    const Conditioning cond =
        j.contains("conditioning") ? conditioning_from_json(j.at("conditioning"), where + ".conditioning") : Conditioning{};
    return self_duality_moment_test(bundle, get_str(j, "component", "S"), rule(), p_grid_of(j, default_p_grid()), cond,
                                    w ? &*w : nullptr, ho);
  }
  if (t.type == "pw_symmetry")
    return pw_symmetry_test(bundle, get_str(j, "component", "X"), rule(), j.at("w").get<double>(), family_of(j, where),
                            ho);
  if (t.type == "quasi_self_duality") {
    QuasiOptions qo;
    qo.p_grid = p_grid_of(j, qo.p_grid);
    qo.max_abs_alpha = get_num(j, "max_abs_alpha", qo.max_abs_alpha);
    const std::string s = get_str(j, "component", "S");
    double alpha = 0.0;
    if (j.at("alpha").is_number()) {
      alpha = j.at("alpha").get<double>();
    } else {
      const auto est = estimate_order(bundle, s);
      alpha = est.alpha;
      extra["estimated_order"] = est.to_json();
    }
    auto r = quasi_self_duality_test(bundle, s, alpha, rule(), family_of(j, where), qo, ho);
    if (extra.contains("estimated_order")) r.notes.push_back("alpha estimated from the sample");
    return r;
  }
  if (t.type == "estimate_order") {
    OrderOptions oo;
    oo.lo = get_num(j, "lo", oo.lo);
    oo.hi = get_num(j, "hi", oo.hi);
    if (j.contains("bootstrap")) oo.bootstrap = j.at("bootstrap").get<std::size_t>();
    oo.confidence = get_num(j, "confidence", oo.confidence);
    const auto est = estimate_order(bundle, get_str(j, "component", "S"), oo);
    TestReport r;
    r.test = "estimate_order";
    r.z_star = ho.z_star;
    r.metadata = bundle_metadata(bundle);
    r.metadata["params"] = j;
    r.extras["order"] = est.to_json();
    if (j.contains("expect_alpha")) {
      const double e = j.at("expect_alpha").get<double>();
      r.add_row("alpha", est.alpha, e, est.se);
      r.finalize();
      r.pass = est.ci_lo <= e && e <= est.ci_hi;
      r.notes.push_back("verdict: expected order inside the bootstrap interval");
    } else {
      r.finalize();
    }
    return r;
  }
  if (t.type == "process_symmetry")
    return process_symmetry_test(bundle, j.at("component").get<std::string>(), fns_of(j, "theta", T, where), ho);

  PhiOptions po;
  po.qv = get_str(j, "qv", "");
  const std::string y = get_str(j, "component", martingale);
  if (t.type == "strong_self_duality")
    return strong_self_duality_test(bundle, y, fns_of(j, "phi", T, where), fns_of(j, "lambda", T, where), po, ho);
  if (t.type == "hphi_symmetry")
    return hphi_symmetry_test(bundle, y, fns_of(j, "phi", T, where), fns_of(j, "lambda", T, where), po, ho);
  if (t.type == "ocone_qv_law") {
    std::vector<double> cps{0.25 * T, 0.5 * T, 0.75 * T, T};
    if (j.contains("checkpoints")) cps = j.at("checkpoints").get<std::vector<double>>();
    return ocone_qv_law_test(bundle, y, fns_of(j, "phi", T, where), cps, po, ho);
  }
  if (t.type == "strict_local") {
    std::vector<double> times{0.25 * T, 0.5 * T, T};
    if (j.contains("times")) times = j.at("times").get<std::vector<double>>();
    const auto sl = strict_local_diagnostic(bundle, times);
    informational = true;
    TestReport r;
    r.test = "strict_local_diagnostic";
    r.metadata = bundle_metadata(bundle);
    r.metadata["params"] = j;
    for (const auto& row : sl.rows) r.add_row("t=" + fmt(row.t), row.mean, 1.0, row.se);
    r.finalize();
    r.pass = true;
    r.notes.push_back(sl.caveat);
    r.extras["diagnostic"] = sl.to_json();
    return r;
  }
  throw InvalidArgument(where + ".type: unsupported");
}

json simulate_summary(const PathBundle& bundle, std::size_t sample_paths, std::string& paths_csv) {
  const auto& comps = bundle.components();
  const std::size_t n = bundle.grid().n_steps(), N = bundle.n_paths();
  const FeatureTable F = extract_features(bundle, comps.size(), [&](std::size_t, const PathBuffer& buf, std::span<double> row) {
    for (std::size_t c = 0; c < comps.size(); ++c) row[c] = buf.component(c)[n];
  });
  json terminal = json::object();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    auto col = F.column(c);
    const double m = pairwise_sum(col) / static_cast<double>(N);
    for (double& x : col) x = (x - m) * (x - m);
    const double var = pairwise_sum(col) / static_cast<double>(N - 1);
    terminal[comps[c]] = {{"mean", number(m)}, {"se", number(std::sqrt(var / static_cast<double>(N)))}};
  }
  std::ostringstream csv;
  csv << "path,index,t";
  for (const auto& c : comps) csv << "," << c;
  csv << "\n";
  PathBuffer buf = bundle.make_buffer();
  for (std::size_t p = 0; p < std::min(sample_paths, N); ++p) {
    bundle.load(p, buf);
    for (std::size_t i = 0; i <= n; ++i) {
      csv << p << "," << i << "," << csv_number(bundle.grid().time(i));
      for (std::size_t c = 0; c < comps.size(); ++c) csv << "," << csv_number(buf.component(c)[i]);
      csv << "\n";
    }
  }
  paths_csv = csv.str();
  return {{"schema", kReportSchema}, {"test", "simulate"}, {"metadata", bundle_metadata(bundle)}, {"terminal", terminal}};
}

bool selected(const RunOptions& opts, const std::string& name) {
  return opts.only.empty() || std::find(opts.only.begin(), opts.only.end(), name) != opts.only.end();
}

}  // namespace

std::string rows_csv(const TestReport& r) {
  std::ostringstream os;
  os << "row_id,lhs,rhs,se,z\n";
  for (const auto& row : r.rows) {
    std::string id;
    for (char c : row.id) id += c == '"' ? std::string("\"\"") : std::string(1, c);
    os << '"' << id << "\"," << csv_number(row.lhs) << "," << csv_number(row.rhs) << "," << csv_number(row.se) << ","
       << csv_number(row.z) << "\n";
  }
  return os.str();
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  for (const auto& name : opts.only) {
    const bool known = std::any_of(cfg.tests.begin(), cfg.tests.end(), [&](const auto& t) { return t.name == name; }) ||
                       std::any_of(cfg.hedges.begin(), cfg.hedges.end(), [&](const auto& h) { return h.name == name; });
    if (!known) throw InvalidArgument("--only: no invocation named '" + name + "'");
  }
  const std::uint64_t seed = resolve_seed(opts.seed, cfg);
  const std::filesystem::path out = opts.out_dir.value_or(cfg.out_dir);
  std::filesystem::create_directories(out);
  const PathBundle bundle = simulate_process(cfg.process, cfg.grid(), cfg.n_paths, seed);

  RunResult res;
  json reports = json::array();
  bool all_pass = true;
  const auto record = [&](const std::string& name, const std::string& test, json report, const TestReport* rows,
                          bool pass, bool informational) {
    const auto jpath = out / (name + ".json");
    write_file(jpath, report.dump(2) + "\n", res.files);
    json entry{{"name", name}, {"test", test}, {"verdict", pass ? "pass" : "fail"},
               {"informational", informational}, {"report", jpath.filename().string()}};
    if (rows) {
      entry["max_abs_z"] = number(rows->max_abs_z);
      entry["worst_row"] = rows->worst_row;
      if (cfg.write_csv) {
        const auto cpath = out / (name + ".csv");
        write_file(cpath, rows_csv(*rows), res.files);
        entry["csv"] = cpath.filename().string();
      }
    }
    if (!informational) all_pass = all_pass && pass;
    if (opts.log)
      *opts.log << name << ": " << (pass ? "pass" : "FAIL") << (informational ? " (informational)" : "")
                << (rows ? " max|z|=" + fmt(rows->max_abs_z) + " worst=" + rows->worst_row : std::string()) << "\n";
    reports.push_back(std::move(entry));
  };

  if (opts.mode == RunMode::Simulate) {
    std::string paths;
    json s = simulate_summary(bundle, opts.sample_paths, paths);
    write_file(out / "simulate.json", s.dump(2) + "\n", res.files);
    write_file(out / "paths.csv", paths, res.files);
    if (opts.log) *opts.log << "simulate: " << bundle.n_paths() << " paths written summary\n";
  }
  if (opts.mode == RunMode::All || opts.mode == RunMode::Tests) {
    for (const auto& t : cfg.tests) {
      if (!selected(opts, t.name)) continue;
      json extra = json::object();
      bool informational = false;
      TestReport r = run_test(t, bundle, cfg, extra, informational);
      for (auto& [k, v] : extra.items()) r.extras[k] = v;
      record(t.name, t.type, to_json(r), &r, r.pass, informational);
    }
  }
  if (opts.mode == RunMode::All || opts.mode == RunMode::Hedges) {
    for (const auto& h : cfg.hedges) {
      if (!selected(opts, h.name)) continue;
      BarrierContract c{h.strike, h.barrier, cfg.horizon};
      HedgeOptions ho;
      ho.z_star = h.z_star;
      ho.restarts = h.restarts;
      ho.n_bins = h.n_bins;
      const HedgeReport r =
          h.type == "power" ? power_hedge_demo(bundle, c, h.alpha, ho) : semi_static_hedge(bundle, c, ho);
      json j = r.to_json();
      j["metadata"] = bundle_metadata(bundle);
      record(h.name, r.name, j, &r.swap_rows, r.pass, false);
    }
  }

  res.exit_code = all_pass ? 0 : 2;
  res.summary = {{"schema", kSummarySchema},
                 {"verdict", all_pass ? "pass" : "fail"},
                 {"exit_code", res.exit_code},
                 {"seed", seed},
                 {"process", to_json(cfg.process)},
                 {"grid", to_json(cfg.grid())},
                 {"n_paths", cfg.n_paths},
                 {"reports", reports}};
  write_file(out / "summary.json", res.summary.dump(2) + "\n", res.files);
  return res;
}

std::string catalog_text() {
  std::ostringstream os;
  os << "sympath catalog 1\n\n";
  const std::vector<ProcessSpec> specs{Gbm{}, OconeSv{}, CubicBm{}, LevyArea{}, make_qsd_lift(Gbm{}, 0.5)};
  os << "processes " << specs.size() << "\n";
  for (const auto& s : specs) {
    os << "  " << s.family() << "\n";
    os << "    defaults:   " << to_json(s).dump() << "\n";
    os << "    components:";
    for (const auto& c : s.components()) os << " " << c;
    os << "\n    martingale: " << s.martingale_component() << "\n";
  }
  os << "\ndefault families\n";
  os << "  payoffs:      abs sq call(-0.1) call(0) call(0.1); signed split cube+ cube-\n";
  os << "  conditioning: 8 quantile bins of the tested component at tau, plus the constant 1\n";
  os << "  p_grid:      ";
  for (const auto& p : default_p_grid()) os << " " << fmt(p.real()) << (p.imag() < 0 ? "-" : "+") << fmt(std::abs(p.imag())) << "i";
  os << "\n  functions:    ";
  bool first = true;
  for (const auto& f : default_function_family(1.0)) {
    os << (first ? "" : " ") << f.name();
    first = false;
  }
  os << "   (T = 1)\n";
  os << "  z_star:       4\n";

  struct Suite {
    const char* name;
    const char* tests;
    const char* process;
    const char* anchor;
  };
  const Suite suites[] = {
      {"self-duality", "self_duality_moment", "GBM lambda=0",
       "complex-moment strip: E (S_T/S_tau)^p = E (S_T/S_tau)^(1-p), Re p in [0,1]"},
      {"quasi-order", "estimate_order quasi_self_duality", "GBM sigma=0.2 lambda=0.05",
       "order formula alpha = 1 - 2 lambda / sigma^2"},
      {"structure", "quasi_self_duality", "QSDLift",
       "structure: exp(kappa [M]) E(M) is quasi self-dual of order 1 - 2 kappa"},
      {"pw-equivalence", "pw_symmetry", "GBM",
       "P^w symmetry for one w in [0,1] holds for all w"},
      {"ocone-conditional", "conditional_symmetry", "OconeSV",
       "continuous Ocone martingales are conditionally symmetric"},
      {"ocone-strong", "strong_self_duality ocone_qv_law hphi_symmetry", "OconeSV",
       "Y is Ocone iff E(Y) is strongly self-dual"},
      {"counterexample", "process_symmetry conditional_symmetry", "CubicBM",
       "int B^2 dB is process symmetric but not conditionally symmetric"},
      {"strict-local", "strict_local", "CubicBM",
       "E(int B^2 dB) is a strict local martingale (informational)"},
      {"barrier-hedge", "semi_static_hedge power_hedge_demo", "GBM",
       "at the touch: call(K) = (K/B) put(B^2/K) under self-duality"},
  };
  os << "\ncanned suites " << std::size(suites) << "\n";
  for (const auto& s : suites) {
    os << "  " << s.name << "\n";
    os << "    tests:   " << s.tests << "\n";
    os << "    process: " << s.process << "\n";
    os << "    anchor:  " << s.anchor << "\n";
  }
  os << "\ntest types:";
  for (const auto& t : test_types()) os << " " << t;
  os << "\nhedge types: semi_static power\n";
  return os.str();
}

}  // namespace sympath
