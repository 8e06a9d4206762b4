#include "sympath/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sympath/error.hpp"
#include "sympath/parallel.hpp"

namespace sympath {

double z_score(double lhs, double rhs, double se) noexcept {
  const double diff = lhs - rhs;
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  if (std::abs(diff) <= 1e-12 * scale) return 0.0;
  if (!(se > 0.0)) return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  return diff / se;
}

void TestReport::add_row(std::string id, double lhs, double rhs, double se) {
  rows.push_back(ReportRow{std::move(id), lhs, rhs, se, z_score(lhs, rhs, se)});
}

void TestReport::finalize() {
  max_abs_z = 0.0;
  worst_row.clear();
  for (const auto& r : rows) {
    const double a = std::isnan(r.z) ? std::numeric_limits<double>::infinity() : std::abs(r.z);
    if (worst_row.empty() || a > max_abs_z) {
      max_abs_z = a;
      worst_row = r.id;
    }
  }
  pass = max_abs_z <= z_star;
}

const ReportRow* TestReport::find(std::string_view id) const {
  for (const auto& r : rows)
    if (r.id == id) return &r;
  return nullptr;
}

double TestReport::max_abs_z_with_prefix(std::string_view prefix) const {
  double m = 0.0;
  for (const auto& r : rows)
    if (std::string_view(r.id).starts_with(prefix)) m = std::max(m, std::abs(r.z));
  return m;
}

namespace {

double weight_at(std::span<const double> w, std::size_t i) { return w.empty() ? 1.0 : w[i]; }

template <class Sum>
RowEstimate compare_impl(std::span<const double> a, std::span<const double> b, std::span<const double> wl,
                         std::span<const double> wr, Sum sum) {
  const std::size_t n = a.size();
  SYMPATH_REQUIRE(n >= 2 && b.size() == n, "compare_paired: need >= 2 paired samples");
  SYMPATH_REQUIRE(wl.empty() || wl.size() == n, "compare_paired: lhs weights misaligned");
  SYMPATH_REQUIRE(wr.empty() || wr.size() == n, "compare_paired: rhs weights misaligned");
  std::vector<double> tmp(n);
  const auto mean_of = [&](auto f) {
    for (std::size_t i = 0; i < n; ++i) tmp[i] = f(i);
    return sum(std::span<const double>(tmp)) / static_cast<double>(n);
  };
  const double ml = wl.empty() ? 1.0 : mean_of([&](std::size_t i) { return wl[i]; });
  const double mr = wr.empty() ? 1.0 : mean_of([&](std::size_t i) { return wr[i]; });
  const double lhs = mean_of([&](std::size_t i) { return weight_at(wl, i) * a[i]; }) / ml;
  const double rhs = mean_of([&](std::size_t i) { return weight_at(wr, i) * b[i]; }) / mr;
  const double psi_sq = mean_of([&](std::size_t i) {
    const double psi = weight_at(wl, i) * (a[i] - lhs) / ml - weight_at(wr, i) * (b[i] - rhs) / mr;
    return psi * psi;
  });
  const double var = psi_sq * static_cast<double>(n) / static_cast<double>(n - 1);
  return RowEstimate{lhs, rhs, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

RowEstimate compare_paired(std::span<const double> a, std::span<const double> b, std::span<const double> wl,
                           std::span<const double> wr) {
  return compare_impl(a, b, wl, wr, [](std::span<const double> v) { return pairwise_sum(v); });
}

namespace reference {

RowEstimate compare_paired(std::span<const double> a, std::span<const double> b, std::span<const double> wl,
                           std::span<const double> wr) {
  // Deliberately independent: accumulates in long double with explicit loops.
  const std::size_t n = a.size();
  SYMPATH_REQUIRE(n >= 2 && b.size() == n, "compare_paired: need >= 2 paired samples");
  long double sl = 0, sr = 0, sla = 0, srb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double l = weight_at(wl, i), r = weight_at(wr, i);
    sl += l;
    sr += r;
    sla += l * a[i];
    srb += r * b[i];
  }
  const long double lhs = sla / sl, rhs = srb / sr;
  const long double ml = sl / n, mr = sr / n;
  long double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double psi = weight_at(wl, i) * (a[i] - lhs) / ml - weight_at(wr, i) * (b[i] - rhs) / mr;
    ss += psi * psi;
  }
  const long double var = ss / (n - 1);
  return RowEstimate{static_cast<double>(lhs), static_cast<double>(rhs), static_cast<double>(std::sqrt(var / n))};
}

}  // namespace reference
}  // namespace sympath
