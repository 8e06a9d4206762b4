#include "sympath/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "sympath/error.hpp"

namespace sympath {

using nlohmann::json;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json to_json(const ProcessSpec& spec) {
  json j;
  j["family"] = spec.family();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Gbm>) {
          j["sigma"] = s.sigma;
          j["lambda"] = s.lambda;
          j["s0"] = s.s0;
        } else if constexpr (std::is_same_v<T, OconeSv>) {
          j["mu"] = s.mu;
          j["v0"] = s.v0;
        } else if constexpr (std::is_same_v<T, QsdLift>) {
          j["base"] = to_json(*s.base);
          j["kappa"] = s.kappa;
        }
      },
      spec.variant());
  return j;
}

json to_json(const TimeGrid& grid) { return json{{"T", grid.horizon()}, {"n_steps", grid.n_steps()}}; }

json to_json(const StoppingRule& rule) {
  if (const auto* d = std::get_if<DeterministicTime>(&rule)) return json{{"type", "deterministic"}, {"t", d->t}};
  const auto& b = std::get<BarrierHit>(rule);
  json j{{"type", "barrier"},
         {"component", b.component},
         {"level", b.level},
         {"direction", b.direction == Direction::Up ? "up" : "down"}};
  if (b.cap) j["cap"] = *b.cap;
  return j;
}

json bundle_metadata(const PathBundle& bundle) {
  return json{{"label", bundle.label()},
              {"spec", bundle.spec() ? to_json(*bundle.spec()) : json(nullptr)},
              {"grid", to_json(bundle.grid())},
              {"n_paths", bundle.n_paths()},
              {"seed", bundle.seed()}};
}

json to_json(const TestReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back(json{{"id", row.id}, {"lhs", number(row.lhs)}, {"rhs", number(row.rhs)},
                        {"se", number(row.se)}, {"z", number(row.z)}});
  return json{{"schema", kReportSchema},
              {"test", r.test},
              {"verdict", r.pass ? "pass" : "fail"},
              {"z_star", r.z_star},
              {"max_abs_z", number(r.max_abs_z)},
              {"worst_row", r.worst_row},
              {"n_rows", r.rows.size()},
              {"metadata", r.metadata},
              {"notes", r.notes},
              {"extras", r.extras},
              {"rows", rows}};
}

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw InvalidArgument(where + ": expected an object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw InvalidArgument(where + "." + k + ": unknown key");
}

double get_number(const json& j, const std::string& where, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidArgument(where + "." + key + ": expected a number");
  return v.get<double>();
}

}  // namespace

ProcessSpec process_spec_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw InvalidArgument(where + ".family: required string");
  const auto family = j.at("family").get<std::string>();
  std::optional<ProcessSpec> spec;
  if (family == "GBM") {
    check_keys(j, where, {"family", "sigma", "lambda", "s0"});
    Gbm g;
    g.sigma = get_number(j, where, "sigma", g.sigma);
    g.lambda = get_number(j, where, "lambda", g.lambda);
    g.s0 = get_number(j, where, "s0", g.s0);
    spec = ProcessSpec(g);
  } else if (family == "OconeSV") {
    check_keys(j, where, {"family", "mu", "v0"});
    OconeSv o;
    o.mu = get_number(j, where, "mu", o.mu);
    o.v0 = get_number(j, where, "v0", o.v0);
    spec = ProcessSpec(o);
  } else if (family == "CubicBM") {
    check_keys(j, where, {"family"});
    spec = ProcessSpec(CubicBm{});
  } else if (family == "LevyArea") {
    check_keys(j, where, {"family"});
    spec = ProcessSpec(LevyArea{});
  } else if (family == "QSDLift") {
    check_keys(j, where, {"family", "base", "kappa"});
    if (!j.contains("base")) throw InvalidArgument(where + ".base: required");
    spec = make_qsd_lift(process_spec_from_json(j.at("base"), where + ".base"), get_number(j, where, "kappa", 0.0));
  } else {
    throw InvalidArgument(where + ".family: unknown family '" + family + "'");
  }
  try {
    spec->validate();
  } catch (const InvalidArgument& e) {
    // validate() names fields as "process.<field>"; rebase onto `where`.
    std::string msg = e.what();
    if (msg.rfind("process", 0) == 0) msg = where + msg.substr(7);
    throw InvalidArgument(msg);
  }
  return *spec;
}

StoppingRule stopping_rule_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw InvalidArgument(where + ".type: required string");
  const auto type = j.at("type").get<std::string>();
  if (type == "deterministic") {
    check_keys(j, where, {"type", "t"});
    if (!j.contains("t")) throw InvalidArgument(where + ".t: required");
    return DeterministicTime{get_number(j, where, "t", 0.0)};
  }
  if (type == "barrier") {
    check_keys(j, where, {"type", "component", "level", "direction", "cap"});
    BarrierHit b;
    if (!j.contains("component") || !j.at("component").is_string())
      throw InvalidArgument(where + ".component: required string");
    b.component = j.at("component").get<std::string>();
    if (!j.contains("level")) throw InvalidArgument(where + ".level: required");
    b.level = get_number(j, where, "level", 0.0);
    if (j.contains("direction")) {
      const auto& d = j.at("direction");
      if (d == "up") b.direction = Direction::Up;
      else if (d == "down") b.direction = Direction::Down;
      else throw InvalidArgument(where + ".direction: expected \"up\" or \"down\"");
    }
    if (j.contains("cap")) b.cap = get_number(j, where, "cap", 0.0);
    return b;
  }
  throw InvalidArgument(where + ".type: unknown rule type '" + type + "'");
}

}  // namespace sympath
