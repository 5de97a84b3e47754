#include "supstable/density_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace supstable {

const char* to_string(Provenance source) {
  switch (source) {
    case Provenance::analytic:
      return "analytic";
    case Provenance::quadrature:
      return "quadrature";
    case Provenance::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

bool TableMeta::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::vector<double> make_grid(double lo, double hi, std::size_t points,
                              GridSpacing spacing) {
  if (points < 2 || !(hi > lo)) {
    throw std::invalid_argument("grid needs at least 2 points and hi > lo");
  }
  if (spacing == GridSpacing::log && !(lo > 0.0)) {
    throw std::invalid_argument("log grid needs lo > 0");
  }
  std::vector<double> grid(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double u = static_cast<double>(i) / n;
    grid[i] = spacing == GridSpacing::log
                  ? std::exp(std::log(lo) + u * (std::log(hi) - std::log(lo)))
                  : lo + u * (hi - lo);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

void check_table(const DensityTable& table) {
  if (table.grid.size() != table.values.size()) {
    throw std::invalid_argument("grid and values differ in length");
  }
  if (table.has_errbars() && table.errbars.size() != table.grid.size()) {
    throw std::invalid_argument("errbars and grid differ in length");
  }
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    if (!std::isfinite(table.grid[i]) || !std::isfinite(table.values[i])) {
      throw std::invalid_argument("non-finite table entry");
    }
    if (table.values[i] < 0.0) {
      throw std::invalid_argument("negative density value");
    }
    if (i > 0 && !(table.grid[i] > table.grid[i - 1])) {
      throw std::invalid_argument("grid is not strictly increasing");
    }
  }
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
  double sum = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    sum += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return sum;
}

double trapezoid_mass(const DensityTable& table) {
  return trapezoid(table.grid, table.values);
}

DensityTable scale_density(const DensityTable& table, double t, double eta) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("scale_density needs t > 0");
  }
  const double stretch = std::pow(t, eta);
  DensityTable out = table;
  out.meta.resolution *= stretch;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.grid[i] = table.grid[i] * stretch;
    out.values[i] = table.values[i] / stretch;
    if (out.has_errbars()) {
      out.errbars[i] = table.errbars[i] / stretch;
    }
  }
  return out;
}

double interpolate_linear(const DensityTable& table, double x) {
  const auto& g = table.grid;
  if (x <= g.front()) {
    return table.values.front();
  }
  if (x >= g.back()) {
    return table.values.back();
  }
  const auto it = std::upper_bound(g.begin(), g.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - g.begin());
  const double w = (x - g[j - 1]) / (g[j] - g[j - 1]);
  return (1.0 - w) * table.values[j - 1] + w * table.values[j];
}

}  // namespace supstable
