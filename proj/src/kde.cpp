#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "supstable/errors.hpp"
#include "supstable/fluctuation_mc.hpp"

namespace supstable {

namespace {

constexpr double kKernelReach = 8.0;  // bandwidths
const double kGaussNorm = 1.0 / std::sqrt(2.0 * std::numbers::pi);

std::vector<double> sorted_logs(const MCRun& run) {
  std::vector<double> z;
  z.reserve(run.samples.size());
  for (double s : run.samples) {
    if (s > 0.0) {
      z.push_back(std::log(s));
    }
  }
  std::sort(z.begin(), z.end());
  return z;
}

double quantile_sorted(const std::vector<double>& z, double q) {
  const double pos = q * static_cast<double>(z.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  const std::size_t j = std::min(i + 1, z.size() - 1);
  return z[i] + (pos - static_cast<double>(i)) * (z[j] - z[i]);
}

double bandwidth_of(const std::vector<double>& z, const std::string& rule) {
  const double n = static_cast<double>(z.size());
  const double mean = std::accumulate(z.begin(), z.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : z) {
    ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / std::max(n - 1.0, 1.0));
  const double iqr = quantile_sorted(z, 0.75) - quantile_sorted(z, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  if (rule == "silverman-log") {
    return 0.9 * spread * std::pow(n, -0.2);
  }
  if (rule == "scott-log") {
    return 1.06 * sd * std::pow(n, -0.2);
  }
  throw ConfigError("unknown kde bandwidth rule '" + rule + "'");
}

std::vector<double> checked_logs(const MCRun& run) {
  if (run.samples.empty()) {
    throw InsufficientSamples("empty Monte Carlo run");
  }
  std::vector<double> z = sorted_logs(run);
  if (z.size() < 2 || z.front() == z.back()) {
    throw InsufficientSamples("samples have no spread; density undefined");
  }
  return z;
}

inline double kernel(double d) { return kGaussNorm * std::exp(-0.5 * d * d); }

// Sums of K((u - z)/h) and its square over the sorted log samples z.
struct KernelSums {
  double s1 = 0.0;
  double s2 = 0.0;
};

KernelSums kernel_sums(const std::vector<double>& z, double u, double h) {
  auto lo = std::lower_bound(z.begin(), z.end(), u - kKernelReach * h);
  auto hi = std::upper_bound(lo, z.end(), u + kKernelReach * h);
  KernelSums sums;
  for (auto it = lo; it != hi; ++it) {
    const double k = kernel((u - *it) / h);
    sums.s1 += k;
    sums.s2 += k * k;
  }
  return sums;
}

// Per grid point, sum over paths of K(u - log fine_i) K(u - log coarse_i)
// for index-aligned supremum samples of two levels.
std::vector<double> paired_products(const MCRun& fine, const MCRun& coarse,
                                    std::span<const double> grid, double h) {
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < fine.samples.size(); ++i) {
    // a coarse maximum never exceeds the fine one; 0 carries no kernel mass
    if (coarse.samples[i] > 0.0) {
      pairs.emplace_back(std::log(fine.samples[i]),
                         std::log(coarse.samples[i]));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double u = std::log(grid[g]);
    auto lo = std::lower_bound(pairs.begin(), pairs.end(),
                               std::make_pair(u - kKernelReach * h, -HUGE_VAL));
    double sum = 0.0;
    for (auto it = lo; it != pairs.end() && it->first <= u + kKernelReach * h;
         ++it) {
      sum += kernel((u - it->first) / h) * kernel((u - it->second) / h);
    }
    out[g] = sum;
  }
  return out;
}

}  // namespace

double log_bandwidth(const MCRun& run) {
  return bandwidth_of(checked_logs(run), run.config.kde_bandwidth_rule);
}

DensityTable estimate_density(const MCRun& run, std::span<const double> grid,
                              double bandwidth) {
  if (grid.empty() || !(grid.front() > 0.0)) {
    throw std::invalid_argument("density grid must be positive and nonempty");
  }
  const std::vector<double> z = checked_logs(run);
  const double h = bandwidth > 0.0
                       ? bandwidth
                       : bandwidth_of(z, run.config.kde_bandwidth_rule);
  const double n_total = static_cast<double>(run.samples.size());

  DensityTable table;
  table.grid.assign(grid.begin(), grid.end());
  table.values.resize(grid.size());
  table.errbars.resize(grid.size());
  bool usable = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const KernelSums sums = kernel_sums(z, std::log(x), h);
    // density of log X at u is the mean of K_h(u - Z_i) over all draws
    const double mean = sums.s1 / (n_total * h);
    const double second = sums.s2 / (n_total * h * h);
    const double se = std::sqrt(std::max(second - mean * mean, 0.0) / n_total);
    table.values[i] = mean / x;
    table.errbars[i] = se / x;
    if (mean > 0.0 && se < 0.5 * mean) {
      usable = true;
    }
  }
  if (!usable) {
    throw InsufficientSamples(
        "relative standard error above 50% at every grid point");
  }

  std::ostringstream desc;
  desc.precision(12);
  desc << (run.meander ? "meander" : "supremum") << " level=" << run.level
       << " seed=" << run.config.seed << " samples=" << run.samples.size()
       << " log_bandwidth=" << h;
  table.meta.source = Provenance::monte_carlo;
  table.meta.config = desc.str();
  table.meta.resolution = run.mesh_scale;
  return table;
}

Extrapolation extrapolate_levels(std::span<const MCRun> runs,
                                 std::span<const double> grid) {
  if (runs.empty()) {
    throw std::invalid_argument("extrapolate_levels needs at least one run");
  }
  const double h = log_bandwidth(runs.back());
  std::vector<DensityTable> tables;
  std::vector<int> resolutions;
  for (const MCRun& run : runs) {
    tables.push_back(estimate_density(run, grid, h));
    resolutions.push_back(run.level);
  }
  Extrapolation out = extrapolate_levels(tables, resolutions);
  if (runs.size() < 3 || out.gain == 0.0) {
    return out;
  }

  // value = sum over attempted paths of c_i / (h x) with
  // c_i = w3 K(u - Z3_i) 1{kept at finest} - w2 K(u - Z2_i) 1{kept below}.
  const MCRun& r3 = runs[runs.size() - 1];
  const MCRun& r2 = runs[runs.size() - 2];
  const bool meander = r3.meander;
  if (!meander && r3.samples.size() != r2.samples.size()) {
    throw std::invalid_argument("supremum levels must share their paths");
  }
  const double paths = static_cast<double>(r3.attempted);
  const double w3 = (1.0 + out.gain) / static_cast<double>(r3.samples.size());
  const double w2 = out.gain / static_cast<double>(r2.samples.size());
  const std::vector<double> z3 = sorted_logs(r3);
  const std::vector<double> z2 = sorted_logs(r2);
  std::vector<double> cross;
  if (!meander) {
    cross = paired_products(r3, r2, grid, h);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (out.fallback[i]) {
      continue;
    }
    const double u = std::log(grid[i]);
    const KernelSums a = kernel_sums(z3, u, h);
    const KernelSums b = kernel_sums(z2, u, h);
    // accepted finest-level meander paths are accepted below with the same
    // endpoint, so their cross products are squares
    const double ab = meander ? a.s2 : cross[i];
    const double sum = w3 * a.s1 - w2 * b.s1;
    const double sq = w3 * w3 * a.s2 + w2 * w2 * b.s2 - 2.0 * w3 * w2 * ab;
    const double var = std::max(sq - sum * sum / paths, 0.0);
    out.table.errbars[i] = std::sqrt(var) / (h * grid[i]);
  }
  return out;
}

}  // namespace supstable
