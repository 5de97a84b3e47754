#include "supstable/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "supstable/asymptotics.hpp"
#include "supstable/csv.hpp"
#include "supstable/errors.hpp"
#include "supstable/fluctuation_mc.hpp"
#include "supstable/identities.hpp"
#include "supstable/stable_core.hpp"

namespace supstable {

namespace fs = std::filesystem;

namespace {

struct Output {
  fs::path dir;
  std::string comment;

  fs::path operator/(const std::string& name) const { return dir / name; }
};

Output prepare(const RunConfig& cfg) {
  validate(cfg);
  Output o{cfg.out, "config_hash=" + config_hash(cfg) +
                        " seed=" + std::to_string(*cfg.seed)};
  fs::create_directories(o.dir);
  std::ofstream echo = open_output(o / "effective_config.txt");
  echo << "# " << o.comment << '\n' << canonical_text(cfg);
  return o;
}

void require_positive_grid(const RunConfig& cfg) {
  if (!(cfg.grid_min > 0.0)) {
    throw ConfigError("this command needs grid_min > 0");
  }
}

void write_density(const Output& o, const std::string& name,
                   const std::string& column, const DensityTable& t) {
  std::vector<CsvColumn> cols = {{"x", t.grid}, {column, t.values}};
  if (t.has_errbars()) {
    cols.push_back({"stderr", t.errbars});
  }
  write_csv(o / name, o.comment, cols);
}

void write_samples(const Output& o, const std::string& stem,
                   const std::vector<MCRun>& runs) {
  for (const MCRun& run : runs) {
    std::ofstream out =
        open_output(o / (stem + "_level" + std::to_string(run.level) + ".csv"));
    out << "# " << o.comment << '\n';
    write_runs_csv(out, std::span(&run, 1));
  }
}

void log_flags(std::ostream& log, const DensityTable& t) {
  if (!t.meta.flags.empty()) {
    log << "  flags:";
    for (const std::string& f : t.meta.flags) {
      log << ' ' << f;
    }
    log << '\n';
  }
}

DensityTable f_table(const StableParams& params,
                     const std::vector<double>& grid, double t, int order) {
  const double s = std::pow(t, -params.eta);
  std::vector<double> scaled(grid);
  for (double& x : scaled) {
    x *= s;
  }
  const double factor = std::pow(s, 1.0 + order);
  DensityTable out;
  out.grid = grid;
  for (const InversionValue& v : invert_on_grid(params, scaled, order)) {
    out.values.push_back(v.value * factor);
    out.errbars.push_back(v.abs_err * factor);
  }
  return out;
}

Extrapolation run_sup(const RunConfig& cfg, const StableParams& params,
                      const MCConfig& mc, const Output& o, bool samples,
                      std::ostream& log) {
  log << "supremum: " << mc.n_paths << " paths, levels";
  for (const int n : mc.levels) {
    log << ' ' << n;
  }
  log << '\n';
  const std::vector<MCRun> runs = simulate_supremum_levels(params, mc);
  Extrapolation ex = extrapolate_levels(runs, cfg.grid());
  write_csv(o / "m.csv", o.comment,
            {{"x", ex.table.grid},
             {"m", ex.table.values},
             {"stderr", ex.table.errbars},
             {"level_bias", ex.level_bias}});
  log << "  bias exponent " << ex.delta << ", trapezoid mass "
      << trapezoid_mass(ex.table) << '\n';
  log_flags(log, ex.table);
  if (samples) {
    write_samples(o, "samples_sup", runs);
  }
  return ex;
}

struct MeanderTables {
  Extrapolation ptilde;
  DensityTable p_up;
  DensityTable m;  // convolution of ptilde
};

MeanderTables run_meander(const RunConfig& cfg, const StableParams& params,
                          const Output& o, bool samples, std::ostream& log) {
  MCConfig mc = cfg.mc();
  mc.min_accepted = cfg.meander_accepted;
  if (mc.min_accepted > 0) {
    mc.n_paths = 1;
  }
  log << "meander: " << mc.min_accepted << " accepted paths wanted\n";
  const std::vector<MCRun> runs = simulate_meander_levels(params, mc);
  CsvColumn level{"level", {}};
  CsvColumn accepted{"accepted", {}};
  CsvColumn attempted{"attempted", {}};
  CsvColumn rate{"acceptance_rate", {}};
  for (const MCRun& r : runs) {
    level.values.push_back(r.level);
    accepted.values.push_back(static_cast<double>(r.samples.size()));
    attempted.values.push_back(static_cast<double>(r.attempted));
    rate.values.push_back(r.acceptance_rate);
    log << "  level " << r.level << ": acceptance rate " << r.acceptance_rate
        << " (" << r.samples.size() << " of " << r.attempted << ")\n";
  }
  write_csv(o / "meander_summary.csv", o.comment,
            {level, accepted, attempted, rate});

  const std::vector<double> grid = cfg.grid();
  MeanderTables out{extrapolate_levels(runs, grid), {}, {}};
  const DensityTable& pt = out.ptilde.table;
  write_csv(o / "ptilde.csv", o.comment,
            {{"x", pt.grid},
             {"ptilde", pt.values},
             {"stderr", pt.errbars},
             {"level_bias", out.ptilde.level_bias}});
  log << "  bias exponent " << out.ptilde.delta << ", trapezoid mass "
      << trapezoid_mass(pt) << '\n';
  log_flags(log, pt);

  if (cfg.p_up) {
    out.p_up = estimate_p_up(params, pt);
    write_csv(o / "p_up.csv", o.comment,
              {{"x", out.p_up.grid},
               {"p_up", out.p_up.values},
               {"stderr", out.p_up.errbars}});
  }

  // the convolution identity lives at time 1
  const double t = cfg.horizon;
  const DensityFn fn =
      meander_density_fn(scale_density(pt, 1.0 / t, params), params)
          .normalized();
  std::vector<double> unit_grid(grid);
  for (double& x : unit_grid) {
    x *= std::pow(t, -params.eta);
  }
  out.m = scale_density(m_table_from_ptilde(fn, params, unit_grid), t, params);
  out.m.grid = grid;
  write_density(o, "m_from_ptilde.csv", "m", out.m);

  if (samples) {
    write_samples(o, "samples_meander", runs);
  }
  return out;
}

void write_passage(const Output& o, const DensityFn& m,
                   const StableParams& params, double x,
                   const std::vector<double>& ts) {
  CsvColumn h{"h", {}};
  CsvColumn surv{"survival", {}};
  CsvColumn tail{"t_pow_h", {}};
  for (const double t : ts) {
    h.values.push_back(passage_density(m, params, x, t));
    surv.values.push_back(passage_survival(m, params, x, t));
    tail.values.push_back(std::pow(t, params.rho + 1.0) * h.values.back());
  }
  write_csv(o / "passage.csv", o.comment, {{"t", ts}, h, surv, tail});
}

}  // namespace

int cmd_density(const RunConfig& cfg, std::ostream& log) {
  const Output o = prepare(cfg);
  const StableParams params = cfg.params();
  const std::vector<double> grid = cfg.grid();
  std::vector<CsvColumn> cols = {{"x", grid}};
  for (int k = 0; k <= cfg.derivatives; ++k) {
    const DensityTable t = f_table(params, grid, cfg.horizon, k);
    const std::string name = k == 0 ? "f" : "f" + std::to_string(k);
    cols.push_back({name, t.values});
    cols.push_back({k == 0 ? "abs_err" : name + "_abs_err", t.errbars});
  }
  write_csv(o / "f.csv", o.comment, cols);
  log << "density: " << grid.size() << " points for " << params.describe()
      << ", t = " << cfg.horizon << '\n';
  return kExitOk;
}

int cmd_sup(const RunConfig& cfg, std::ostream& log) {
  require_positive_grid(cfg);
  const Output o = prepare(cfg);
  run_sup(cfg, cfg.params(), cfg.mc(), o, cfg.write_samples, log);
  return kExitOk;
}

int cmd_meander(const RunConfig& cfg, std::ostream& log) {
  require_positive_grid(cfg);
  const Output o = prepare(cfg);
  run_meander(cfg, cfg.params(), o, cfg.write_samples, log);
  return kExitOk;
}

int cmd_passage(const RunConfig& cfg, std::ostream& log) {
  require_positive_grid(cfg);
  const Output o = prepare(cfg);
  const StableParams params = cfg.params();
  MCConfig mc = cfg.mc();
  if (mc.horizon != 1.0) {
    log << "passage: ignoring t = " << mc.horizon
        << "; m is simulated at time 1\n";
    mc.horizon = 1.0;
  }
  const Extrapolation ex = run_sup(cfg, params, mc, o, false, log);
  const DensityFn m = supremum_density_fn(ex.table, params).normalized();
  write_passage(o, m, params, cfg.passage_x, cfg.t_grid());
  log << "passage: x = " << cfg.passage_x << ", total mass "
      << passage_total_mass(m, params, cfg.passage_x) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  require_positive_grid(cfg);
  if (cfg.horizon != 1.0) {
    throw ConfigError("verify works at t = 1");
  }
  const Output o = prepare(cfg);
  const StableParams params = cfg.params();
  const std::vector<double> grid = cfg.grid();
  log << "verify: " << params.describe() << '\n';

  const DensityTable f = f_table(params, grid, 1.0, 0);
  write_csv(o / "f.csv", o.comment,
            {{"x", grid}, {"f", f.values}, {"abs_err", f.errbars}});

  const Extrapolation sup = run_sup(cfg, params, cfg.mc(), o, false, log);
  const MeanderTables mt = run_meander(cfg, params, o, false, log);
  const DensityTable p_up =
      cfg.p_up ? mt.p_up : estimate_p_up(params, mt.ptilde.table);

  // identities: both convolution forms against the direct estimate
  const DensityFn pfn =
      meander_density_fn(mt.ptilde.table, params).normalized();
  CsvColumn beta{"m_beta", {}};
  CsvColumn zform{"m_z", {}};
  CsvColumn direct{"m_direct", sup.table.values};
  double worst_forms = 0.0;
  double worst_direct = 0.0;
  for (const double x : grid) {
    beta.values.push_back(m_from_ptilde_beta(pfn, params, x));
    zform.values.push_back(m_from_ptilde_z(pfn, params, x));
    worst_forms = std::max(
        worst_forms, std::abs(beta.values.back() / zform.values.back() - 1.0));
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] >= 0.1 && grid[i] <= 10.0 && direct.values[i] > 0.0) {
      worst_direct = std::max(
          worst_direct, std::abs(beta.values[i] / direct.values[i] - 1.0));
    }
  }
  write_csv(o / "identities.csv", o.comment,
            {{"x", grid}, direct, beta, zform});
  log << "identities: forms agree to " << worst_forms
      << ", convolution vs direct on [0.1, 10]: " << worst_direct << '\n';

  const DensityFn mfn = supremum_density_fn(sup.table, params).normalized();
  write_passage(o, mfn, params, cfg.passage_x, cfg.t_grid());
  log << "passage: total mass "
      << passage_total_mass(mfn, params, cfg.passage_x) << '\n';

  Artifacts art;
  art.m = sup.table;
  art.ptilde = mt.ptilde.table;
  art.p_up = p_up;
  art.passage_x = cfg.passage_x;
  const AsymptoticReport report =
      verify_all(params, art, VerifyOptions{cfg.tolerances});
  {
    std::ofstream out = open_output(o / "report.csv");
    out << "# " << o.comment << '\n';
    write_report_csv(out, report);
  }
  std::ostringstream text;
  write_report_text(text, report);
  {
    std::ofstream out = open_output(o / "report.txt");
    out << "# " << o.comment << '\n' << text.str();
  }
  log << text.str();

  const MeasuredConstants c = estimate_constants(report, params);
  {
    std::ofstream out = open_output(o / "constants.csv");
    out << "# " << o.comment << '\n' << "constant,value,ci_lo,ci_hi\n";
    const auto row = [&out](const char* name,
                            const std::optional<ConstantEstimate>& e) {
      if (!e) {
        return;
      }
      std::string line = name;
      for (const double v : {e->value, e->ci_lo, e->ci_hi}) {
        line += ',';
        append_number(line, v);
      }
      out << line << '\n';
    };
    row("A", c.A);
    row("B", c.B);
    row("B_from_cdf", c.B_from_cdf);
    row("C", c.C);
    row("D", c.D);
  }
  if (c.A) {
    log << "A / c_plus = " << c.A_ratio << '\n';
  }
  return report.any_failed() ? kExitFailure : kExitOk;
}

int run_command(const std::string& name, const RunConfig& cfg,
                std::ostream& log, std::ostream& err) {
  try {
    if (name == "density") {
      return cmd_density(cfg, log);
    }
    if (name == "sup") {
      return cmd_sup(cfg, log);
    }
    if (name == "meander") {
      return cmd_meander(cfg, log);
    }
    if (name == "passage") {
      return cmd_passage(cfg, log);
    }
    if (name == "verify") {
      return cmd_verify(cfg, log);
    }
    err << "error: unknown command '" << name << "'\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RejectRange& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RejectSubordinator& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const RejectAsymmetricCauchy& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace supstable
