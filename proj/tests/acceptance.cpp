// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "supstable/asymptotics.hpp"
#include "supstable/commands.hpp"
#include "supstable/fluctuation_mc.hpp"
#include "supstable/identities.hpp"
#include "supstable/stable_core.hpp"

using namespace supstable;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 7;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title,
            const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  failures += !o.pass;
  std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::vector<double> table_grid() {
  return make_grid(1e-3, 1e3, 121, GridSpacing::log);
}

// Monte Carlo artifacts, simulated once per parameter set.
struct Simulation {
  StableParams params;
  Extrapolation sup;
  Extrapolation meander;
  DensityTable p_up;
  double sup_seconds = 0.0;
  double meander_seconds = 0.0;
};

// Smallest doubling ladder (finest level at least 512) whose finest
// skeleton is trusted from x upwards.
std::vector<int> levels_trusted_from(const StableParams& p, double x) {
  int n = 512;
  while (kSkeletonFloor * std::pow(1.0 / n, p.eta) > x) {
    n *= 2;
  }
  return {n / 4, n / 2, n};
}

// The supremum table is checked against exact laws from x = 0.1 up.
Simulation simulate(double alpha, double c_plus, double c_minus) {
  Simulation s;
  s.params = validate_params(alpha, c_plus, c_minus);
  const auto grid = table_grid();
  MCConfig cfg;
  cfg.seed = kSeed;
  cfg.n_paths = 1'000'000;
  cfg.levels = levels_trusted_from(s.params, 0.1);
  auto t0 = Clock::now();
  s.sup = extrapolate_levels(simulate_supremum_levels(s.params, cfg), grid);
  s.sup_seconds = seconds_since(t0);

  const int finest = cfg.levels.back();
  cfg.n_paths = 1;
  cfg.min_accepted = 100'000;
  cfg.levels = MCConfig{}.levels;
  t0 = Clock::now();
  s.meander = extrapolate_levels(simulate_meander_levels(s.params, cfg), grid);
  s.meander_seconds = seconds_since(t0);
  s.p_up = estimate_p_up(s.params, s.meander.table);
  std::printf(
      "  simulated %s: supremum %.1f s (finest level %d), meander "
      "%.1f s\n",
      s.params.describe().c_str(), s.sup_seconds, finest, s.meander_seconds);
  return s;
}

AsymptoticReport report_of(const Simulation& s) {
  Artifacts art;
  art.m = s.sup.table;
  art.ptilde = s.meander.table;
  art.p_up = s.p_up;
  art.passage_x = 2.0;
  return verify_all(s.params, art);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main() {
  using std::numbers::pi;

  report(1, "Cauchy density against its closed form", [] {
    const auto t0 = Clock::now();
    const StableParams c = validate_params(1.0, 1.0 / pi, 1.0 / pi);
    double worst = 0.0;
    for (const double x : make_grid(0.0, 20.0, 401, GridSpacing::linear)) {
      worst = std::max(worst,
                       std::abs(density_f(c, x) - 1.0 / (pi * (1.0 + x * x))));
    }
    const double dt = seconds_since(t0);
    return Outcome{worst <= 1e-6 && dt < 5.0,
                   fmt("max abs error %.2e on 401 points of [0, 20] (tol "
                       "1e-6), %.2f s (limit 5 s)",
                       worst, dt)};
  });

  report(2, "tail constant of f, symmetric alpha = 1.5", [] {
    const auto t0 = Clock::now();
    const StableParams p = validate_params(1.5, 1, 1);
    const double v = std::pow(100.0, 2.5) * density_f(p, 100.0);
    const double dt = seconds_since(t0);
    return Outcome{v >= 0.95 && v <= 1.05 && dt < 5.0,
                   fmt("x^2.5 f(x) = %.5f at x = 100 (want [0.95, 1.05]), "
                       "%.2f s (limit 5 s)",
                       v, dt)};
  });

  const Simulation sym = simulate(1.5, 1, 1);
  const Simulation neg = simulate(1.75, 0, 1);
  const AsymptoticReport sym_report = report_of(sym);
  const AsymptoticReport neg_report = report_of(neg);

  report(3, "beta and z convolution forms agree", [&] {
    const StableParams& p = sym.params;
    DensityTable toy_table;
    toy_table.grid = table_grid();
    for (const double y : toy_table.grid) {
      toy_table.values.push_back(3.0 * std::pow(y, -2.5));
    }
    struct Input {
      const char* name;
      DensityFn fn;
      StableParams params;
    };
    const std::vector<Input> inputs = {
        {"power law", DensityFn(toy_table, -2.5, -2.5), p},
        {"MC meander", meander_density_fn(sym.meander.table, p).normalized(),
         p},
        {"MC meander, no positive jumps",
         meander_density_fn(neg.meander.table, neg.params).normalized(),
         neg.params}};
    const auto grid = make_grid(0.02, 50.0, 50, GridSpacing::log);
    const auto t0 = Clock::now();
    double worst = 0.0;
    bool repeatable = true;
    for (const Input& in : inputs) {
      for (const double x : grid) {
        const double b = m_from_ptilde_beta(in.fn, in.params, x);
        const double z = m_from_ptilde_z(in.fn, in.params, x);
        worst = std::max(worst, std::abs(b / z - 1.0));
        repeatable &= b == m_from_ptilde_beta(in.fn, in.params, x) &&
                      z == m_from_ptilde_z(in.fn, in.params, x);
      }
    }
    const double dt = seconds_since(t0);
    return Outcome{worst <= 1e-6 && repeatable && dt < 10.0,
                   fmt("max relative difference %.2e over 3 inputs x 50 "
                       "points (tol 1e-6), repeatable %s, %.2f s (limit 10 s)",
                       worst, repeatable ? "yes" : "no", dt)};
  });

  report(4, "small-x exponent of the supremum density", [&] {
    const TailFit fit = fit_power_law(sym.sup.table, Side::zero);
    const double dt = sym.sup_seconds;
    return Outcome{
        std::abs(fit.exponent + 0.25) <= 0.15 && dt < 600.0,
        fmt("exponent %.4f +- %.4f on [%.3g, %.3g] (want -0.25 +- "
            "0.15), simulation %.0f s (limit 600 s)",
            fit.exponent, fit.stderr_exponent, fit.x_lo, fit.x_hi, dt)};
  });

  report(5, "tail of the supremum density", [&] {
    const TailFit fit = fit_power_law(sym.sup.table, Side::infinity);
    const PinnedConstant c =
        pinned_constant(sym.sup.table, -2.5, fit.x_lo, fit.x_hi);
    const bool ok = std::abs(fit.exponent + 2.5) <= 0.15 &&
                    std::abs(c.constant - 1.0) <= 0.2;
    return Outcome{ok, fmt("exponent %.4f +- %.4f on [%.3g, %.3g] (want -2.5 "
                           "+- 0.15), constant %.4f (want 1 +- 20%%)",
                           fit.exponent, fit.stderr_exponent, fit.x_lo,
                           fit.x_hi, c.constant)};
  });

  report(6, "meander density at zero and in the tail", [&] {
    const TailFit zero = fit_power_law(sym.meander.table, Side::zero);
    const TailFit tail = fit_power_law(sym.meander.table, Side::infinity);
    const PinnedConstant c =
        pinned_constant(sym.meander.table, -2.5, tail.x_lo, tail.x_hi);
    const double dt = sym.meander_seconds;
    const bool ok = std::abs(zero.exponent - 0.75) <= 0.15 &&
                    std::abs(c.constant / 2.0 - 1.0) <= 0.25 && dt < 900.0;
    return Outcome{ok, fmt("zero exponent %.4f +- %.4f (want 0.75 +- 0.15), "
                           "tail constant %.4f on [%.3g, %.3g] (want 2 +- "
                           "25%%), simulation %.0f s (limit 900 s)",
                           zero.exponent, zero.stderr_exponent, c.constant,
                           tail.x_lo, tail.x_hi, dt)};
  });

  report(7, "supremum density from the meander convolution", [&] {
    const DensityFn fn =
        meander_density_fn(sym.meander.table, sym.params).normalized();
    double worst = 0.0;
    const DensityTable& m = sym.sup.table;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.grid[i] >= 0.1 && m.grid[i] <= 10.0) {
        const double conv = m_from_ptilde_beta(fn, sym.params, m.grid[i]);
        worst = std::max(worst, std::abs(conv / m.values[i] - 1.0));
      }
    }
    return Outcome{
        worst <= 0.10,
        fmt("sup relative difference %.4f on [0.1, 10] (tol 0.10)", worst)};
  });

  report(8, "no positive jumps: exact supremum density and skipped laws", [&] {
    double worst = 0.0;
    const DensityTable& m = neg.sup.table;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m.grid[i] >= 0.1 && m.grid[i] <= 5.0) {
        const double exact = spectrally_negative_m(neg.params, m.grid[i]);
        worst = std::max(worst, std::abs(m.values[i] / exact - 1.0));
      }
    }
    const TailFit zero = fit_power_law(m, Side::zero);
    std::set<std::string> skipped;
    std::set<std::string> expected;
    for (const ReportEntry& e : neg_report.entries) {
      if (e.verdict == Verdict::skipped) {
        skipped.insert(e.law);
      }
      if (needs_positive_jumps(e.law)) {
        expected.insert(e.law);
      }
    }
    const bool ok =
        worst <= 0.05 && std::abs(zero.exponent) <= 0.1 && skipped == expected;
    return Outcome{
        ok, fmt("max relative error %.4f on [0.1, 5] (tol 0.05), "
                "zero exponent %.4f (want 0 +- 0.1), %zu of %zu "
                "positive-jump laws skipped, %zu other skips",
                worst, zero.exponent, skipped.size(), expected.size(),
                skipped.size() - std::min(skipped.size(), expected.size()))};
  });

  report(9, "first-passage density at level 2", [&] {
    const StableParams& p = sym.params;
    const DensityFn m = supremum_density_fn(sym.sup.table, p).normalized();
    const double mass = passage_total_mass(m, p, 2.0);
    const ReportEntry* late = sym_report.find("passage_t_inf");
    const ReportEntry* early = sym_report.find("passage_t_zero");
    const double want = p.eta * p.tail_A * std::pow(2.0, -p.alpha);
    const bool ok = std::abs(mass - 1.0) <= 1e-3 &&
                    std::abs(late->fit.exponent + (p.rho + 1.0)) <= 0.1 &&
                    std::abs(early->measured_constant / want - 1.0) <= 0.10;
    return Outcome{
        ok, fmt("total mass %.6f (want 1 +- 1e-3), large-t exponent "
                "%.4f (want -1.5 +- 0.1), small-t limit %.4f (want "
                "%.4f +- 10%%)",
                mass, late->fit.exponent, early->measured_constant, want)};
  });

  report(10, "tail of the derivative of f", [] {
    bool ok = true;
    std::string detail;
    for (const double alpha : {1.2, 1.5}) {
      const StableParams p = validate_params(alpha, 1, 1);
      const double onset = tail_onset(p);
      const auto grid = make_grid(onset, 10.0 * onset, 33, GridSpacing::log);
      const DensityTable f = tabulate_density(p, grid);
      DensityTable df;
      df.grid = grid;
      for (const InversionValue& v : invert_on_grid(p, grid, 1)) {
        df.values.push_back(-v.value);
      }
      const auto w = WindowPolicy::between(onset, 10.0 * onset);
      const TailFit fit = fit_power_law(df, Side::infinity, w);
      const double a1 =
          -pinned_constant(df, -(alpha + 2.0), onset, 10.0 * onset).constant;
      const double a =
          pinned_constant(f, -(alpha + 1.0), onset, 10.0 * onset).constant;
      const double ratio = a1 / a;
      ok &= std::abs(fit.exponent + alpha + 2.0) <= 0.1 &&
            std::abs(ratio / -(alpha + 1.0) - 1.0) <= 0.10;
      detail +=
          fmt("%salpha %.1f: exponent %.4f (want %.1f +- 0.1), A1/A "
              "%.4f (want %.1f +- 10%%)",
              detail.empty() ? "" : "; ", alpha, fit.exponent, -(alpha + 2.0),
              ratio, -(alpha + 1.0));
    }
    return Outcome{ok, detail};
  });

  report(11, "verify output is reproducible across runs and threads", [] {
    const fs::path root =
        fs::temp_directory_path() / "supstable_acceptance_repro";
    fs::remove_all(root);
    RunConfig cfg;
    apply_entries(cfg, parse_config_text("alpha = 1.5\nc_plus = 1\n"
                                         "c_minus = 1\nseed = 21\n"
                                         "n_paths = 100000\n"
                                         "meander_accepted = 10000\n"));
    const unsigned many = std::max(4u, std::thread::hardware_concurrency());
    const std::vector<std::pair<std::string, unsigned>> runs = {
        {"a", many}, {"b", many}, {"c", 1}};
    std::ostringstream sink;
    for (const auto& [name, threads] : runs) {
      cfg.out = (root / name).string();
      cfg.threads = threads;
      run_command("verify", cfg, sink, sink);
    }
    std::size_t files = 0;
    std::vector<std::string> differing;
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      ++files;
      const std::string name = entry.path().filename().string();
      const std::string a = slurp(entry.path());
      if (a != slurp(root / "b" / name) || a != slurp(root / "c" / name)) {
        differing.push_back(name);
      }
    }
    for (const char* other : {"b", "c"}) {
      if (static_cast<std::size_t>(
              std::distance(fs::directory_iterator(root / other),
                            fs::directory_iterator())) != files) {
        differing.push_back(std::string("file list of ") + other);
      }
    }
    std::string which;
    for (const std::string& d : differing) {
      which += " " + d;
    }
    return Outcome{files > 0 && differing.empty(),
                   fmt("%zu files compared over two runs with %u threads and "
                       "one with 1 thread, differing:%s",
                       files, many, which.empty() ? " none" : which.c_str())};
  });

  report(12, "conditioned-to-stay-positive density exponents", [&] {
    const TailFit zero = fit_power_law(sym.p_up, Side::zero);
    const TailFit tail = fit_power_law(sym.p_up, Side::infinity);
    const bool ok = std::abs(zero.exponent - 1.5) <= 0.2 &&
                    std::abs(tail.exponent + 1.75) <= 0.2;
    return Outcome{ok, fmt("zero exponent %.4f (want 1.5 +- 0.2), tail "
                           "exponent %.4f (want -1.75 +- 0.2)",
                           zero.exponent, tail.exponent)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
