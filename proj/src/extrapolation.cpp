#include <algorithm>
#include <cmath>
#include <sstream>

#include "supstable/errors.hpp"
#include "supstable/fluctuation_mc.hpp"

namespace supstable {

namespace {

constexpr double kDeltaMin = 0.1;
constexpr double kDeltaMax = 4.0;
// In units of the coarsest level's step size: bias rates are fitted beyond
// kRateFloor, and points below kExtrapolationFloor keep the finest level.
constexpr double kRateFloor = 10.0;
constexpr double kExtrapolationFloor = 2.0;

// Solves (n1^-d - n2^-d) / (n2^-d - n3^-d) = ratio for d by bisection.
double solve_delta(double n1, double n2, double n3, double ratio) {
  auto model = [&](double d) {
    return (std::pow(n1, -d) - std::pow(n2, -d)) /
           (std::pow(n2, -d) - std::pow(n3, -d));
  };
  // model() increases with d
  if (ratio <= model(kDeltaMin)) {
    return kDeltaMin;
  }
  if (ratio >= model(kDeltaMax)) {
    return kDeltaMax;
  }
  double lo = kDeltaMin;
  double hi = kDeltaMax;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (model(mid) < ratio ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Extrapolation extrapolate_levels(std::span<const DensityTable> levels,
                                 std::span<const int> resolutions) {
  if (levels.empty() || levels.size() != resolutions.size()) {
    throw std::invalid_argument(
        "extrapolate_levels needs one resolution per table");
  }
  const DensityTable& finest = levels.back();
  Extrapolation out;
  out.table = finest;
  out.fallback.assign(finest.size(), false);
  out.level_bias.assign(finest.size(), 0.0);
  if (levels.size() < 3) {
    out.table.meta.flags.push_back("not-extrapolated");
    return out;
  }
  const DensityTable& t1 = levels[levels.size() - 3];
  const DensityTable& t2 = levels[levels.size() - 2];
  const DensityTable& t3 = finest;
  if (t1.size() != t3.size() || t2.size() != t3.size()) {
    throw std::invalid_argument("level tables must share one grid");
  }
  const std::size_t last = resolutions.size() - 1;
  const double n1 = resolutions[last - 2];
  const double n2 = resolutions[last - 1];
  const double n3 = resolutions[last];

  const std::size_t n = t3.size();
  // Pointwise rates are only trusted clear of the skeleton boundary layer
  // at the origin, where the coarsest level is still far from the limit.
  const double layer = kRateFloor * t1.meta.resolution;
  const double floor = kExtrapolationFloor * t1.meta.resolution;
  std::vector<bool> monotone(n, false);
  std::vector<double> rates;
  std::vector<double> fallback_rates;
  bool any_change = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double d1 = t2.values[i] - t1.values[i];
    const double d2 = t3.values[i] - t2.values[i];
    if (d1 != 0.0 || d2 != 0.0) {
      any_change = true;
    }
    if (d1 * d2 > 0.0) {
      monotone[i] = true;
      const double rate = solve_delta(n1, n2, n3, d1 / d2);
      (t3.grid[i] >= layer ? rates : fallback_rates).push_back(rate);
    }
  }
  if (!any_change) {
    return out;
  }
  if (rates.empty()) {
    rates = std::move(fallback_rates);
  }
  if (rates.empty()) {
    throw NonMonotoneBias(
        "no grid point moves monotonically across levels; cannot fit the bias");
  }

  const auto mid = rates.begin() + rates.size() / 2;
  std::nth_element(rates.begin(), mid, rates.end());
  out.delta = *mid;
  const double p2 = std::pow(n2, -out.delta);
  const double p3 = std::pow(n3, -out.delta);
  const double gain = p3 / (p2 - p3);
  out.gain = gain;

  bool any_fallback = false;
  bool any_layer = false;
  bool clamped = false;
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = t3.values[i] - t2.values[i];
    if (t3.grid[i] < floor) {
      out.fallback[i] = true;
      any_layer = true;
      continue;
    }
    if (!monotone[i]) {
      const double d1 = t2.values[i] - t1.values[i];
      if (d1 != 0.0 || d2 != 0.0) {
        out.fallback[i] = true;
        any_fallback = true;
      }
      continue;
    }
    double v = t3.values[i] + gain * d2;
    if (v < 0.0) {
      v = 0.0;
      clamped = true;
    }
    out.level_bias[i] = v - t3.values[i];
    out.table.values[i] = v;
    if (t3.has_errbars() && t2.has_errbars()) {
      const double e2 = t2.errbars[i];
      const double e3 = t3.errbars[i];
      out.table.errbars[i] =
          std::sqrt(e3 * e3 + gain * gain * (e2 * e2 + e3 * e3));
    }
  }
  if (any_fallback) {
    out.table.meta.flags.push_back("nonmonotone-bias");
  }
  if (any_layer) {
    out.table.meta.flags.push_back("boundary-layer");
  }
  if (clamped) {
    out.table.meta.flags.push_back("clamped");
  }
  std::ostringstream desc;
  desc.precision(6);
  desc << out.table.meta.config << " extrapolated levels=" << n1 << "/" << n2
       << "/" << n3 << " delta=" << out.delta;
  out.table.meta.config = desc.str();
  return out;
}

}  // namespace supstable
