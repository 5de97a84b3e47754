#pragma once

#include <span>
#include <string>
#include <vector>

namespace supstable {

/// Monte Carlo tables are trusted from this many skeleton steps
/// (TableMeta::resolution) above the origin.
inline constexpr double kSkeletonFloor = 5.0;

enum class Provenance { analytic, quadrature, monte_carlo };

const char* to_string(Provenance source);

struct TableMeta {
  Provenance source = Provenance::analytic;
  /// Free-form description of the generating configuration.
  std::string config;
  /// Diagnostics attached by producers (e.g. "nonmonotone-bias").
  std::vector<std::string> flags;
  /// Typical step size of the skeleton behind a Monte Carlo table, in
  /// process units; 0 when not applicable.
  double resolution = 0.0;

  bool has_flag(const std::string& flag) const;
};

/// A density tabulated on a strictly increasing grid. Grids are positive for
/// every density of the supremum family; f tables may extend to x <= 0.
struct DensityTable {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> errbars;  ///< empty, or one standard error per point
  TableMeta meta;

  std::size_t size() const { return grid.size(); }
  bool has_errbars() const { return !errbars.empty(); }
};

enum class GridSpacing { log, linear };

/// `points` abscissae from lo to hi inclusive. Log spacing needs lo > 0.
std::vector<double> make_grid(double lo, double hi, std::size_t points,
                              GridSpacing spacing);

/// Throws std::invalid_argument when the structural invariants fail
/// (sizes, strictly increasing grid, nonnegative finite values).
void check_table(const DensityTable& table);

/// Trapezoid integral of the values over the grid.
double trapezoid_mass(const DensityTable& table);

/// Trapezoid integral of any samples over a grid.
double trapezoid(std::span<const double> grid, std::span<const double> values);

/// x -> t^{-eta} table(x t^{-eta}), realised on the rescaled grid x t^{eta}.
DensityTable scale_density(const DensityTable& table, double t, double eta);

/// Piecewise-linear interpolation of the table (no extrapolation: clamps).
double interpolate_linear(const DensityTable& table, double x);

}  // namespace supstable
