#include "sympath/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "sympath/error.hpp"
#include "sympath/json_io.hpp"

namespace sympath {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& why) { throw InvalidArgument(where + ": " + why); }

void allow_keys(const json& j, const std::string& where, const std::set<std::string>& keys) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [k, v] : j.items())
    if (!keys.count(k)) fail(where + "." + k, "unknown key");
}

double num(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::size_t count(const json& j, const std::string& where, std::size_t min_value) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min_value))
    fail(where, "expected an integer >= " + std::to_string(min_value));
  return j.get<std::size_t>();
}

std::string str(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const std::map<std::string, std::set<std::string>>& test_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"conditional_symmetry", {"component", "rule", "payoffs", "conditioning", "weight"}},
      {"self_duality_moment", {"component", "rule", "p_grid", "conditioning", "weight"}},
      {"pw_symmetry", {"component", "rule", "w", "payoffs", "conditioning"}},
      {"quasi_self_duality", {"component", "rule", "alpha", "payoffs", "conditioning", "p_grid", "max_abs_alpha"}},
      {"estimate_order", {"component", "lo", "hi", "bootstrap", "confidence", "expect_alpha"}},
      {"process_symmetry", {"component", "theta"}},
      {"strong_self_duality", {"component", "phi", "lambda", "qv"}},
      {"ocone_qv_law", {"component", "phi", "checkpoints", "qv"}},
      {"hphi_symmetry", {"component", "phi", "lambda", "qv"}},
      {"strict_local", {"times"}},
  };
  return keys;
}

void check_p_grid_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    if (j != "default") fail(where, "expected \"default\" or a list of [a, b] pairs");
    return;
  }
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty list of [a, b] pairs");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) fail(w, "expected [a, b]");
    const double a = num(j[i][0], w + "[0]"), b = num(j[i][1], w + "[1]");
    if (a < 0.0 || a > 1.0) fail(w, "real part must lie in [0, 1]");
    if (std::abs(b) > 4.0) fail(w, "|imaginary part| must be <= 4");
  }
}

void check_weight_json(const json& j, double horizon, const std::string& where) {
  allow_keys(j, where, {"kind", "w", "phi"});
  if (!j.contains("kind")) fail(where + ".kind", "required");
  const auto kind = str(j.at("kind"), where + ".kind");
  static const std::set<std::string> kinds{"P", "Q", "Pw", "H", "Qphi", "Hphi"};
  if (!kinds.count(kind)) fail(where + ".kind", "unknown measure '" + kind + "'");
  if (kind == "Pw") {
    if (!j.contains("w")) fail(where + ".w", "required for Pw");
    const double w = num(j.at("w"), where + ".w");
    if (w < 0.0 || w > 1.0) fail(where + ".w", "must lie in [0, 1]");
  }
  if (kind == "Qphi" || kind == "Hphi") {
    if (!j.contains("phi")) fail(where + ".phi", "required for " + kind);
    if (functions_from_json(json::array({j.at("phi")}), horizon, where + ".phi").size() != 1)
      fail(where + ".phi", "expected one function");
  }
}

TestInvocation parse_test(const json& j, std::size_t index, const ExperimentConfig& cfg) {
  const std::string where = "tests[" + std::to_string(index) + "]";
  if (!j.is_object()) fail(where, "expected an object");
  if (!j.contains("type")) fail(where + ".type", "required");
  const auto type = str(j.at("type"), where + ".type");
  const auto it = test_keys().find(type);
  if (it == test_keys().end()) fail(where + ".type", "unknown test type '" + type + "'");
  std::set<std::string> keys = it->second;
  keys.insert({"name", "type", "z_star"});
  allow_keys(j, where, keys);

  TestInvocation t;
  t.type = type;
  t.name = j.contains("name") ? str(j.at("name"), where + ".name") : std::to_string(index) + "-" + type;
  if (t.name.empty() || t.name.find_first_of("/\\") != std::string::npos || t.name[0] == '.')
    fail(where + ".name", "must be a plain file name");
  t.params = j;

  if (j.contains("z_star") && !(num(j.at("z_star"), where + ".z_star") > 0.0)) fail(where + ".z_star", "must be > 0");
  if (j.contains("component")) (void)str(j.at("component"), where + ".component");
  if (j.contains("rule")) (void)stopping_rule_from_json(j.at("rule"), where + ".rule");
  const bool needs_rule = type == "conditional_symmetry" || type == "self_duality_moment" || type == "pw_symmetry" ||
                          type == "quasi_self_duality";
  if (needs_rule && !j.contains("rule")) fail(where + ".rule", "required");
  if (type == "conditional_symmetry" || type == "process_symmetry")
    if (!j.contains("component")) fail(where + ".component", "required");
  if (j.contains("payoffs")) (void)payoffs_from_json(j.at("payoffs"), where + ".payoffs");
  if (j.contains("conditioning")) (void)conditioning_from_json(j.at("conditioning"), where + ".conditioning");
  if (j.contains("p_grid")) check_p_grid_json(j.at("p_grid"), where + ".p_grid");
  if (j.contains("weight")) check_weight_json(j.at("weight"), cfg.horizon, where + ".weight");
  for (const char* k : {"theta", "phi", "lambda"})
    if (j.contains(k)) (void)functions_from_json(j.at(k), cfg.horizon, where + "." + k);
  if (type == "pw_symmetry") {
    if (!j.contains("w")) fail(where + ".w", "required");
    const double w = num(j.at("w"), where + ".w");
    if (w < 0.0 || w > 1.0) fail(where + ".w", "must lie in [0, 1]");
  }
  if (type == "quasi_self_duality") {
    if (!j.contains("alpha")) fail(where + ".alpha", "required (a number or \"estimate\")");
    const auto& a = j.at("alpha");
    if (!(a.is_number() || a == "estimate")) fail(where + ".alpha", "expected a number or \"estimate\"");
    if (j.contains("max_abs_alpha") && !(num(j.at("max_abs_alpha"), where + ".max_abs_alpha") > 0.0))
      fail(where + ".max_abs_alpha", "must be > 0");
  }
  if (type == "estimate_order") {
    const double lo = j.contains("lo") ? num(j.at("lo"), where + ".lo") : -10.0;
    const double hi = j.contains("hi") ? num(j.at("hi"), where + ".hi") : 10.0;
    if (!(lo < hi)) fail(where + ".lo", "must be < hi");
    if (j.contains("bootstrap")) (void)count(j.at("bootstrap"), where + ".bootstrap", 0);
    if (j.contains("confidence")) {
      const double c = num(j.at("confidence"), where + ".confidence");
      if (!(c > 0.0 && c < 1.0)) fail(where + ".confidence", "must lie in (0, 1)");
    }
    if (j.contains("expect_alpha")) (void)num(j.at("expect_alpha"), where + ".expect_alpha");
  }
  for (const char* k : {"checkpoints", "times"}) {
    if (!j.contains(k)) continue;
    const auto& v = j.at(k);
    const std::string w = where + "." + k;
    if (!v.is_array() || v.empty()) fail(w, "expected a non-empty list of times");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double t = num(v[i], w + "[" + std::to_string(i) + "]");
      if (t < 0.0 || t > cfg.horizon) fail(w + "[" + std::to_string(i) + "]", "must lie in [0, T]");
    }
  }
  if (j.contains("qv")) (void)str(j.at("qv"), where + ".qv");
  if (type == "strict_local" && !cfg.process.get_if<CubicBm>())
    fail(where + ".type", "strict_local requires process.family CubicBM");
  return t;
}

HedgeInvocation parse_hedge(const json& j, std::size_t index, const ExperimentConfig& cfg) {
  const std::string where = "hedges[" + std::to_string(index) + "]";
  allow_keys(j, where, {"name", "type", "strike", "barrier", "alpha", "restarts", "n_bins", "z_star"});
  HedgeInvocation h;
  h.type = j.contains("type") ? str(j.at("type"), where + ".type") : "semi_static";
  if (h.type != "semi_static" && h.type != "power") fail(where + ".type", "expected \"semi_static\" or \"power\"");
  h.name = j.contains("name") ? str(j.at("name"), where + ".name") : "hedge" + std::to_string(index) + "-" + h.type;
  if (h.name.empty() || h.name.find_first_of("/\\") != std::string::npos || h.name[0] == '.')
    fail(where + ".name", "must be a plain file name");
  if (j.contains("strike")) h.strike = num(j.at("strike"), where + ".strike");
  if (j.contains("barrier")) h.barrier = num(j.at("barrier"), where + ".barrier");
  if (j.contains("alpha")) {
    if (h.type != "power") fail(where + ".alpha", "only valid for type \"power\"");
    h.alpha = num(j.at("alpha"), where + ".alpha");
  } else if (h.type == "power") {
    fail(where + ".alpha", "required for type \"power\"");
  }
  if (j.contains("restarts")) h.restarts = count(j.at("restarts"), where + ".restarts", 0);
  if (j.contains("n_bins")) h.n_bins = count(j.at("n_bins"), where + ".n_bins", 1);
  if (j.contains("z_star")) h.z_star = num(j.at("z_star"), where + ".z_star");
  if (!(h.strike > 0.0)) fail(where + ".strike", "must be > 0");
  if (!(h.barrier >= h.strike)) fail(where + ".barrier", "must be >= strike");
  if (!(h.z_star > 0.0)) fail(where + ".z_star", "must be > 0");
  (void)cfg;
  return h;
}

}  // namespace

const std::vector<std::string>& test_types() {
  static const std::vector<std::string> types = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : test_keys()) v.push_back(k);
    return v;
  }();
  return types;
}

Payoff payoff_from_string(const std::string& s, const std::string& where) {
  if (s == "abs") return Payoff::abs();
  if (s == "sq") return Payoff::square();
  if (s == "cube+") return Payoff::cube_pos();
  if (s == "cube-") return Payoff::cube_neg();
  if (s.rfind("call(", 0) == 0 && s.back() == ')') {
    const std::string inner = s.substr(5, s.size() - 6);
    std::size_t used = 0;
    double k = 0.0;
    try {
      k = std::stod(inner, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == inner.size() && !inner.empty() && std::isfinite(k)) return Payoff::call(k);
  }
  fail(where, "unknown payoff '" + s + "' (abs, sq, call(k), cube+, cube-)");
}

std::vector<Payoff> payoffs_from_json(const json& j, const std::string& where) {
  if (j == "default") return default_payoffs();
  if (j == "cubes") return cube_payoffs();
  if (!j.is_array() || j.empty()) fail(where, "expected \"default\", \"cubes\" or a non-empty list of payoff names");
  std::vector<Payoff> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const auto s = str(j[i], w);
    if (s == "default" || s == "cubes") {
      for (const auto& p : payoffs_from_json(s, w)) out.push_back(p);
    } else {
      out.push_back(payoff_from_string(s, w));
    }
  }
  return out;
}

std::vector<DeterministicFn> functions_from_json(const json& j, double horizon, const std::string& where) {
  if (j == "default") return default_function_family(horizon);
  if (!j.is_array() || j.empty()) fail(where, "expected \"default\" or a non-empty list of functions");
  std::vector<DeterministicFn> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "[" + std::to_string(i) + "]";
    const auto& f = j[i];
    if (f.is_number()) {
      out.push_back(DeterministicFn::constant(f.get<double>()));
      continue;
    }
    if (!f.is_object() || !f.contains("type")) fail(w, "expected a number or an object with \"type\"");
    const auto type = str(f.at("type"), w + ".type");
    if (type == "constant") {
      allow_keys(f, w, {"type", "value"});
      if (!f.contains("value")) fail(w + ".value", "required");
      out.push_back(DeterministicFn::constant(num(f.at("value"), w + ".value")));
    } else if (type == "pieces") {
      allow_keys(f, w, {"type", "values"});
      if (!f.contains("values") || !f.at("values").is_array() || f.at("values").empty())
        fail(w + ".values", "expected a non-empty list of numbers");
      std::vector<double> v;
      for (std::size_t k = 0; k < f.at("values").size(); ++k)
        v.push_back(num(f.at("values")[k], w + ".values[" + std::to_string(k) + "]"));
      out.push_back(DeterministicFn::dyadic(horizon, v));
    } else if (type == "sine") {
      allow_keys(f, w, {"type", "k", "amplitude"});
      if (!f.contains("k") || !f.at("k").is_number_integer()) fail(w + ".k", "expected an integer");
      const double amp = f.contains("amplitude") ? num(f.at("amplitude"), w + ".amplitude") : 1.0;
      out.push_back(DeterministicFn::sine(f.at("k").get<int>(), horizon, amp));
    } else {
      fail(w + ".type", "unknown function type '" + type + "' (constant, pieces, sine)");
    }
  }
  return out;
}

Conditioning conditioning_from_json(const json& j, const std::string& where) {
  allow_keys(j, where, {"component", "stat", "n_bins", "constant"});
  Conditioning c;
  if (j.contains("component")) c.component = str(j.at("component"), where + ".component");
  if (j.contains("stat")) {
    const auto s = str(j.at("stat"), where + ".stat");
    if (s == "value_at_tau") c.stat = ConditioningStat::ValueAtTau;
    else if (s == "tau") c.stat = ConditioningStat::StoppingTime;
    else fail(where + ".stat", "expected \"value_at_tau\" or \"tau\"");
  }
  if (j.contains("n_bins")) c.n_bins = count(j.at("n_bins"), where + ".n_bins", 1);
  if (c.n_bins > 64) fail(where + ".n_bins", "must be <= 64");
  if (j.contains("constant")) {
    if (!j.at("constant").is_boolean()) fail(where + ".constant", "expected a boolean");
    c.include_constant = j.at("constant").get<bool>();
  }
  if (c.n_bins <= 1 && !c.include_constant) fail(where, "no multipliers: need n_bins > 1 or constant");
  return c;
}

ExperimentConfig parse_config(const json& j) {
  allow_keys(j, "config", {"schema", "process", "grid", "n_paths", "seed", "tests", "hedges", "output"});
  if (j.contains("schema") && j.at("schema") != kConfigSchema)
    fail("config.schema", std::string("expected \"") + kConfigSchema + "\"");
  ExperimentConfig c;
  if (!j.contains("process")) fail("process", "required");
  c.process = process_spec_from_json(j.at("process"), "process");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    allow_keys(g, "grid", {"T", "n_steps"});
    if (g.contains("T")) c.horizon = num(g.at("T"), "grid.T");
    if (g.contains("n_steps")) c.n_steps = count(g.at("n_steps"), "grid.n_steps", 1);
    if (!(std::isfinite(c.horizon) && c.horizon > 0.0)) fail("grid.T", "must be > 0");
  }
  if (j.contains("n_paths")) c.n_paths = count(j.at("n_paths"), "n_paths", 2);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    allow_keys(o, "output", {"dir", "csv"});
    if (o.contains("dir")) c.out_dir = str(o.at("dir"), "output.dir");
    if (o.contains("csv")) {
      if (!o.at("csv").is_boolean()) fail("output.csv", "expected a boolean");
      c.write_csv = o.at("csv").get<bool>();
    }
  }
  std::set<std::string> names;
  if (j.contains("tests")) {
    if (!j.at("tests").is_array()) fail("tests", "expected a list");
    for (std::size_t i = 0; i < j.at("tests").size(); ++i) {
      c.tests.push_back(parse_test(j.at("tests")[i], i, c));
      if (!names.insert(c.tests.back().name).second) fail("tests[" + std::to_string(i) + "].name", "duplicate name");
    }
  }
  if (j.contains("hedges")) {
    if (!j.at("hedges").is_array()) fail("hedges", "expected a list");
    for (std::size_t i = 0; i < j.at("hedges").size(); ++i) {
      c.hedges.push_back(parse_hedge(j.at("hedges")[i], i, c));
      if (!names.insert(c.hedges.back().name).second) fail("hedges[" + std::to_string(i) + "].name", "duplicate name");
    }
  }
  return c;
}

ExperimentConfig parse_config_text(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InvalidArgument(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON (" +
                          e.what() + ")");
  }
  return parse_config(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace sympath
