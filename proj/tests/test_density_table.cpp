#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "supstable/density_table.hpp"

using namespace supstable;

namespace {

DensityTable exponential_table() {
  DensityTable t;
  t.grid = make_grid(0.0, 20.0, 2001, GridSpacing::linear);
  for (const double x : t.grid) {
    t.values.push_back(std::exp(-x));
  }
  return t;
}

}  // namespace

TEST_CASE("grids") {
  const auto lin = make_grid(-1.0, 1.0, 5, GridSpacing::linear);
  CHECK(lin.front() == -1.0);
  CHECK(lin.back() == 1.0);
  CHECK(lin[2] == doctest::Approx(0.0));
  const auto lg = make_grid(1e-2, 1e2, 5, GridSpacing::log);
  CHECK(lg.front() == doctest::Approx(1e-2));
  CHECK(lg[2] == doctest::Approx(1.0));
  CHECK(lg.back() == doctest::Approx(1e2));
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 5, GridSpacing::log),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 5, GridSpacing::linear),
                  std::invalid_argument);
}

TEST_CASE("table invariants") {
  DensityTable t = exponential_table();
  CHECK_NOTHROW(check_table(t));
  DensityTable bad = t;
  bad.values[3] = -1.0;
  CHECK_THROWS_AS(check_table(bad), std::invalid_argument);
  bad = t;
  bad.grid[5] = bad.grid[4];
  CHECK_THROWS_AS(check_table(bad), std::invalid_argument);
  bad = t;
  bad.errbars = {1.0};
  CHECK_THROWS_AS(check_table(bad), std::invalid_argument);
  bad = t;
  bad.values.pop_back();
  CHECK_THROWS_AS(check_table(bad), std::invalid_argument);
}

TEST_CASE("trapezoid mass") {
  // trapezoid error on exp(-x) with step h is about h^2 / 12
  CHECK(trapezoid_mass(exponential_table()) ==
        doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-5));
}

TEST_CASE("scaling group") {
  const DensityTable t = exponential_table();
  const DensityTable same = scale_density(t, 1.0, 0.8);
  CHECK(same.grid == t.grid);
  CHECK(same.values == t.values);

  const double eta = 1.0 / 1.5;
  const DensityTable there = scale_density(t, 3.7, eta);
  const DensityTable back = scale_density(there, 1.0 / 3.7, eta);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(std::abs(back.grid[i] - t.grid[i]) < 1e-10);
    CHECK(std::abs(back.values[i] - t.values[i]) < 1e-10);
  }
  // mass is preserved
  CHECK(trapezoid_mass(there) == doctest::Approx(trapezoid_mass(t)));

  // time 2 with eta = 1: exp density of 2 X, i.e. exp(-x / 2) / 2
  const DensityTable two = scale_density(t, 2.0, 1.0);
  for (std::size_t i = 0; i < two.size(); i += 100) {
    CHECK(two.values[i] == doctest::Approx(0.5 * std::exp(-two.grid[i] / 2.0)));
  }
}

TEST_CASE("linear interpolation") {
  DensityTable t;
  t.grid = {0.0, 1.0, 3.0};
  t.values = {1.0, 3.0, 1.0};
  CHECK(interpolate_linear(t, 0.5) == doctest::Approx(2.0));
  CHECK(interpolate_linear(t, 2.0) == doctest::Approx(2.0));
  CHECK(interpolate_linear(t, -4.0) == 1.0);
  CHECK(interpolate_linear(t, 9.0) == 1.0);
}

TEST_CASE("metadata flags") {
  TableMeta meta;
  meta.flags = {"clamped"};
  CHECK(meta.has_flag("clamped"));
  CHECK_FALSE(meta.has_flag("nonmonotone-bias"));
  CHECK(std::string(to_string(Provenance::monte_carlo)).size() > 0);
}
