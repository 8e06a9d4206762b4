#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sympath {

struct ReportRow {
  std::string id;
  double lhs = 0.0;
  double rhs = 0.0;
  double se = 0.0;
  double z = 0.0;
};

/// Outcome of one hypothesis family. Verdict is pass iff max |z| <= z_star.
struct TestReport {
  std::string test;
  std::vector<ReportRow> rows;
  double z_star = 4.0;
  bool pass = true;
  double max_abs_z = 0.0;
  std::string worst_row;
  std::vector<std::string> notes;
  nlohmann::json metadata = nlohmann::json::object();
  nlohmann::json extras = nlohmann::json::object();

  void add_row(std::string id, double lhs, double rhs, double se);
  /// Recomputes max |z|, worst row and verdict.
  void finalize();
  const ReportRow* find(std::string_view id) const;
  /// Largest |z| over rows whose id starts with `prefix`.
  double max_abs_z_with_prefix(std::string_view prefix) const;
};

struct RowEstimate {
  double lhs = 0.0;
  double rhs = 0.0;
  double se = 0.0;
};

/// Paired comparison of sum(wl a)/sum(wl) against sum(wr b)/sum(wr) on the
/// same paths. Empty weight spans mean unit weights. The standard error is
/// the delta-method one: var of psi_i = wl_i (a_i - lhs)/mean(wl) -
/// wr_i (b_i - rhs)/mean(wr), divided by N.
RowEstimate compare_paired(std::span<const double> a, std::span<const double> b, std::span<const double> wl = {},
                           std::span<const double> wr = {});

/// z = (lhs - rhs) / se, with exact ties mapped to 0.
double z_score(double lhs, double rhs, double se) noexcept;

namespace reference {
/// Straightforward two-pass serial version of compare_paired for tests.
RowEstimate compare_paired(std::span<const double> a, std::span<const double> b, std::span<const double> wl = {},
                           std::span<const double> wr = {});
}  // namespace reference

}  // namespace sympath
