#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "supstable/asymptotics.hpp"
#include "supstable/errors.hpp"
#include "supstable/rng.hpp"

using namespace supstable;

namespace {

DensityTable power_table(double c, double p, double lo, double hi) {
  DensityTable t;
  t.grid = make_grid(lo, hi, 81, GridSpacing::log);
  for (const double x : t.grid) {
    t.values.push_back(c * std::pow(x, p));
  }
  return t;
}

// stand-in artifacts shaped like the real densities
DensityTable bump(double left, double right) {
  DensityTable t;
  t.grid = make_grid(1e-3, 1e3, 121, GridSpacing::log);
  for (const double x : t.grid) {
    t.values.push_back(std::pow(x, left) / (1.0 + std::pow(x, left - right)));
  }
  return t;
}

}  // namespace

TEST_CASE("exact power law") {
  const DensityTable t = power_table(3.0, -2.5, 1.0, 1e3);
  for (const Side side : {Side::zero, Side::infinity}) {
    const TailFit fit = fit_power_law(t, side);
    CHECK(std::abs(fit.exponent + 2.5) < 1e-12);
    CHECK(std::abs(fit.constant - 3.0) < 1e-12);
    CHECK(fit.stderr_exponent >= 0.0);
    CHECK(fit.x_lo < fit.x_hi);
    CHECK(fit.method == FitMethod::ols_loglog);
  }
  const PinnedConstant c = pinned_constant(t, -2.5, 10.0, 100.0);
  CHECK(c.constant == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("local power law near zero") {
  DensityTable t;
  t.grid = make_grid(1e-6, 1.0, 121, GridSpacing::log);
  for (const double x : t.grid) {
    t.values.push_back(std::pow(x, 0.75) * std::pow(1.0 + x, -3.0));
  }
  // first-order bias of the log-log slope of -3 log(1 + x) on a decade:
  // 3 lo cov(u, e^u) / var(u) for u uniform on [0, ln 10]
  const double len = std::log(10.0);
  const double cov = ((len - 1.0) * 10.0 + 1.0) / len - 0.5 * len * 9.0 / len;
  const double bias_per_lo = 3.0 * cov / (len * len / 12.0);
  double previous = 1.0;
  for (const double lo : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const TailFit fit =
        fit_power_law(t, Side::zero, WindowPolicy::between(lo, 10.0 * lo));
    const double err = std::abs(fit.exponent - 0.75);
    CHECK(err < previous);
    if (lo <= 1e-3) {
      CHECK(err == doctest::Approx(bias_per_lo * lo).epsilon(0.1));
    }
    previous = err;
  }
}

TEST_CASE("windows") {
  const DensityTable t = power_table(1.0, -2.0, 1.0, 5.0);
  CHECK_THROWS_AS(fit_power_law(t, Side::infinity), WindowTooNarrow);
  const DensityTable wide = power_table(1.0, -2.0, 1.0, 1e4);
  CHECK_THROWS_AS(
      fit_power_law(wide, Side::zero, WindowPolicy::between(2.0, 3.0)),
      WindowTooNarrow);
  CHECK_THROWS_AS(
      fit_power_law(wide, Side::zero, WindowPolicy::between(1e5, 1e7)),
      WindowTooNarrow);

  // unreliable points bound the automatic window
  DensityTable noisy = wide;
  noisy.errbars.assign(noisy.size(), 0.0);
  for (std::size_t i = 0; i < noisy.size(); ++i) {
    noisy.errbars[i] = noisy.grid[i] > 2e3 ? noisy.values[i] : 0.0;
  }
  const auto [lo, hi] = automatic_window(noisy, Side::infinity);
  CHECK(hi <= 2e3);
  CHECK(hi > 1e3);
  CHECK(lo == doctest::Approx(hi / 10.0));

  // the zero side starts kSkeletonFloor steps above the origin
  noisy.meta.resolution = 0.5;
  CHECK(automatic_window(noisy, Side::zero).first >= 2.5);
}

TEST_CASE("Hill estimator on Pareto samples") {
  PhiloxStream s(8, 8);
  std::vector<double> xs(1'000'000);
  for (double& x : xs) {
    x = std::pow(s.uniform_open(), -1.0 / 1.5);
  }
  const TailFit all =
      fit_power_law(xs, Side::infinity, WindowPolicy::between(1.0, HUGE_VAL));
  CHECK(all.method == FitMethod::hill);
  CHECK(std::abs(all.exponent + 1.5) < 0.01);
  CHECK(all.constant == doctest::Approx(1.0).epsilon(0.01));

  const TailFit top = fit_power_law(xs, Side::infinity);
  CHECK(std::abs(top.exponent + 1.5) < 4.0 * top.stderr_exponent);
  CHECK(top.stderr_exponent < 0.05);
  CHECK_THROWS_AS(fit_power_law(xs, Side::zero), WindowTooNarrow);
}

TEST_CASE("skip logic") {
  Artifacts art;
  art.m = bump(0.0, -2.75);
  art.ptilde = bump(1.0, -2.75);
  art.p_up = bump(1.75, -2.0);

  const AsymptoticReport neg = verify_all(validate_params(1.75, 0, 1), art);
  std::set<std::string> skipped;
  for (const ReportEntry& e : neg.entries) {
    if (e.verdict == Verdict::skipped) {
      skipped.insert(e.law);
      CHECK(e.reason == "no positive jumps");
    }
  }
  std::set<std::string> expected;
  for (const std::string& law : law_ids()) {
    if (needs_positive_jumps(law)) {
      expected.insert(law);
    }
  }
  CHECK(skipped == expected);
  CHECK(expected.size() == 7);
  CHECK(expected.count("sup_density_tail") == 1);
  CHECK(expected.count("meander_tail") == 1);
  CHECK(expected.count("f_tail") == 1);

  REQUIRE(neg.entries.size() == law_ids().size());
  for (std::size_t i = 0; i < law_ids().size(); ++i) {
    CHECK(neg.entries[i].law == law_ids()[i]);
  }

  art.m = bump(-0.25, -2.5);
  art.ptilde = bump(0.75, -2.5);
  art.p_up = bump(1.5, -1.75);
  const AsymptoticReport sym = verify_all(validate_params(1.5, 1, 1), art);
  for (const ReportEntry& e : sym.entries) {
    CHECK(e.verdict != Verdict::skipped);
  }
  // the stand-ins follow the predicted exponents
  CHECK(sym.find("sup_density_zero")->verdict == Verdict::pass);
  CHECK(sym.find("meander_zero")->verdict == Verdict::pass);
  CHECK(sym.find("f_tail")->verdict == Verdict::pass);
  CHECK(sym.find("f_derivative_tail")->verdict == Verdict::pass);
}

TEST_CASE("verdicts follow the tolerances") {
  Artifacts art;
  art.m = bump(-0.25, -2.5);
  art.ptilde = bump(0.75, -3.5);  // wrong tail on purpose
  art.p_up = bump(1.5, -1.75);
  const StableParams p = validate_params(1.5, 1, 1);
  const AsymptoticReport r = verify_all(p, art);
  CHECK(r.find("meander_tail")->verdict == Verdict::fail);
  CHECK(r.any_failed());

  VerifyOptions zero;
  for (const std::string& law : law_ids()) {
    zero.tolerances[law] = Tolerance{0.0, 0.0};
  }
  const AsymptoticReport strict = verify_all(p, art, zero);
  CHECK(strict.find("f_tail")->verdict == Verdict::fail);
}

TEST_CASE("constants and their intervals") {
  Artifacts art;
  art.m = bump(-0.25, -2.5);
  art.ptilde = bump(0.75, -2.5);
  art.p_up = bump(1.5, -1.75);
  const StableParams p = validate_params(1.5, 1, 1);
  const AsymptoticReport r = verify_all(p, art);
  const std::vector<std::string> all = {"A", "B", "C", "D"};
  const MeasuredConstants c = estimate_constants(r, p, all);
  REQUIRE(c.A);
  CHECK(c.A->ci_lo <= c.A->value);
  CHECK(c.A->value <= c.A->ci_hi);
  CHECK(c.A_ratio == doctest::Approx(c.A->value));
  REQUIRE(c.D);
  CHECK(c.D->value > 0.0);
  REQUIRE(c.B);
  REQUIRE(c.B_from_cdf);
  CHECK(c.B_from_cdf->value == doctest::Approx(c.B->value).epsilon(0.05));

  const AsymptoticReport neg = verify_all(validate_params(1.75, 0, 1), art);
  const std::vector<std::string> a = {"A"};
  CHECK_THROWS_AS(estimate_constants(neg, validate_params(1.75, 0, 1), a),
                  MissingLaw);
}

TEST_CASE("report serialisation") {
  Artifacts art;
  art.m = bump(-0.25, -2.5);
  art.ptilde = bump(0.75, -2.5);
  art.p_up = bump(1.5, -1.75);
  const AsymptoticReport r = verify_all(validate_params(1.5, 1, 1), art);
  std::ostringstream csv;
  write_report_csv(csv, r);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(law_ids().size() + 1));
  std::ostringstream table;
  write_report_text(table, r);
  for (const std::string& law : law_ids()) {
    CHECK(table.str().find(law) != std::string::npos);
  }
}
