#include "supstable/asymptotics.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "supstable/errors.hpp"
#include "supstable/identities.hpp"
#include "supstable/stable_core.hpp"

namespace supstable {

namespace {

constexpr double kDecade = 10.0 * (1.0 - 1e-9);

bool reliable(const DensityTable& t, std::size_t i) {
  if (!(t.values[i] > 0.0) || !std::isfinite(t.values[i])) {
    return false;
  }
  return !t.has_errbars() || t.errbars[i] < kMaxFitRelErr * t.values[i];
}

std::string window_text(double lo, double hi) {
  std::ostringstream s;
  s << "[" << lo << ", " << hi << "]";
  return s.str();
}

struct Points {
  std::vector<double> lx;
  std::vector<double> ly;
  double lo = 0.0;
  double hi = 0.0;
};

Points window_points(const DensityTable& table, double lo, double hi) {
  if (table.size() == 0) {
    throw WindowTooNarrow("empty table");
  }
  lo = std::max(lo, table.grid.front());
  hi = std::min(hi, table.grid.back());
  if (!(lo > 0.0) || !(hi >= lo * kDecade)) {
    throw WindowTooNarrow("window " + window_text(lo, hi) +
                          " spans less than a decade of the support");
  }
  Points p{{}, {}, lo, hi};
  for (std::size_t i = 0; i < table.size(); ++i) {
    const double x = table.grid[i];
    if (x >= lo && x <= hi && reliable(table, i)) {
      p.lx.push_back(std::log(x));
      p.ly.push_back(std::log(table.values[i]));
    }
  }
  if (p.lx.size() < 3) {
    throw WindowTooNarrow("fewer than 3 usable points in " +
                          window_text(lo, hi));
  }
  return p;
}

}  // namespace

const char* to_string(Side side) {
  return side == Side::zero ? "zero" : "infinity";
}

const char* to_string(FitMethod method) {
  return method == FitMethod::hill ? "hill" : "ols-loglog";
}

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::skipped:
      break;
  }
  return "skipped";
}

std::pair<double, double> automatic_window(const DensityTable& table,
                                           Side side) {
  const double floor = std::max(kSkeletonFloor * table.meta.resolution, 0.0);
  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.grid[i] > 0.0 && table.grid[i] >= floor && reliable(table, i)) {
      if (side == Side::infinity || !pick) {
        pick = i;
      }
    }
  }
  if (!pick) {
    throw WindowTooNarrow("no reliable point in the table");
  }
  const double x = table.grid[*pick];
  return side == Side::infinity ? std::pair{x / 10.0, x}
                                : std::pair{x, 10.0 * x};
}

TailFit fit_power_law(const DensityTable& table, Side side,
                      WindowPolicy policy) {
  const auto [lo, hi] = policy.kind == WindowPolicy::Kind::automatic
                            ? automatic_window(table, side)
                            : std::pair{policy.lo, policy.hi};
  const Points p = window_points(table, lo, hi);
  const std::size_t n = p.lx.size();
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += p.lx[i];
    my += p.ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (p.lx[i] - mx) * (p.lx[i] - mx);
    sxy += (p.lx[i] - mx) * (p.ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = p.ly[i] - intercept - slope * p.lx[i];
    rss += r * r;
  }
  const double s2 = rss / static_cast<double>(n - 2);

  TailFit fit;
  fit.method = FitMethod::ols_loglog;
  fit.exponent = slope;
  fit.constant = std::exp(intercept);
  fit.x_lo = p.lo;
  fit.x_hi = p.hi;
  fit.points = n;
  fit.stderr_exponent = std::sqrt(s2 / sxx);
  fit.stderr_constant =
      fit.constant * std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return fit;
}

TailFit fit_power_law(std::span<const double> samples, Side side,
                      WindowPolicy policy) {
  if (side != Side::infinity) {
    throw WindowTooNarrow("the Hill estimator only fits the infinity side");
  }
  std::vector<double> xs;
  xs.reserve(samples.size());
  for (const double x : samples) {
    if (x > 0.0 && std::isfinite(x)) {
      xs.push_back(x);
    }
  }
  if (xs.empty()) {
    throw WindowTooNarrow("no positive samples");
  }
  std::sort(xs.begin(), xs.end());
  const auto quantile = [&xs](double q) {
    const auto k = static_cast<std::size_t>(q * (xs.size() - 1));
    return xs[k];
  };
  double lo = policy.lo;
  double hi = policy.hi;
  if (policy.kind == WindowPolicy::Kind::automatic) {
    lo = quantile(0.99);
    hi = quantile(0.9999);
  }
  const bool capped = std::isfinite(hi) && hi > 0.0;
  if (!capped) {
    hi = HUGE_VAL;
  }
  if (!(lo > 0.0) || !(hi >= lo * kDecade) || lo >= xs.back()) {
    throw WindowTooNarrow("Hill window " + window_text(lo, hi) +
                          " spans less than a decade of the samples");
  }
  const auto first = std::lower_bound(xs.begin(), xs.end(), lo);
  const auto last = std::upper_bound(first, xs.end(), hi);
  const auto k = static_cast<std::size_t>(last - first);
  const auto exceed = static_cast<std::size_t>(xs.end() - first);
  if (k < 3) {
    throw WindowTooNarrow("fewer than 3 samples in the Hill window");
  }
  double mean_log = 0.0;
  for (auto it = first; it != last; ++it) {
    mean_log += std::log(*it / lo);
  }
  mean_log /= static_cast<double>(k);

  // Pareto likelihood truncated to [lo, hi]; plain Hill when uncapped.
  double a = 1.0 / mean_log;
  double info = 1.0 / (a * a);
  if (capped) {
    const double span = std::log(hi / lo);
    const auto score = [&](double s) {
      const double q = std::exp(-s * span);
      return 1.0 / s - mean_log - span * q / (1.0 - q);
    };
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 200;
    double left = 1e-3;
    double right = 50.0;
    if (score(left) * score(right) < 0.0) {
      const auto root =
          boost::math::tools::toms748_solve(score, left, right, tol, iters);
      a = 0.5 * (root.first + root.second);
    }
    const double q = std::exp(-a * span);
    info = 1.0 / (a * a) - span * span * q / ((1.0 - q) * (1.0 - q));
  }
  TailFit fit;
  fit.method = FitMethod::hill;
  fit.exponent = -a;
  fit.stderr_exponent = 1.0 / std::sqrt(k * std::max(info, 1e-300));
  fit.x_lo = lo;
  fit.x_hi = capped ? hi : xs.back();
  fit.points = k;
  const double tail_fraction =
      static_cast<double>(exceed) / static_cast<double>(xs.size());
  fit.constant = tail_fraction * std::pow(lo, a);
  fit.stderr_constant =
      fit.constant * std::hypot(1.0 / std::sqrt(static_cast<double>(exceed)),
                                std::log(lo) * fit.stderr_exponent);
  return fit;
}

PinnedConstant pinned_constant(const DensityTable& table, double exponent,
                               double lo, double hi) {
  const Points p = window_points(table, lo, hi);
  const std::size_t n = p.lx.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += p.ly[i] - exponent * p.lx[i];
  }
  mean /= n;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = p.ly[i] - exponent * p.lx[i] - mean;
    var += r * r;
  }
  var /= static_cast<double>(n - 1);
  const double c = std::exp(mean);
  return {c, c * std::sqrt(var / n)};
}

double ReportEntry::effective_exponent_tolerance() const {
  return std::hypot(tolerance.exponent, 2.0 * fit.stderr_exponent);
}

double ReportEntry::effective_constant_tolerance() const {
  const double rel = measured_constant != 0.0 ? measured_constant_stderr /
                                                    std::abs(measured_constant)
                                              : 0.0;
  return std::hypot(tolerance.constant, 2.0 * rel);
}

const ReportEntry* AsymptoticReport::find(const std::string& law) const {
  for (const ReportEntry& e : entries) {
    if (e.law == law) {
      return &e;
    }
  }
  return nullptr;
}

bool AsymptoticReport::any_failed() const {
  return std::any_of(entries.begin(), entries.end(), [](const ReportEntry& e) {
    return e.verdict == Verdict::fail;
  });
}

const std::vector<std::string>& law_ids() {
  static const std::vector<std::string> ids = {
      "sup_survival_tail", "sup_cdf_zero",  "sup_density_tail",
      "sup_density_zero",  "meander_zero",  "meander_tail",
      "f_at_zero",         "passage_t_inf", "passage_t_zero",
      "p_up_zero",         "p_up_tail",     "f_tail",
      "f_derivative_tail"};
  return ids;
}

bool needs_positive_jumps(const std::string& law) {
  static const std::vector<std::string> ids = {
      "sup_survival_tail", "sup_density_tail", "meander_tail",
      "passage_t_zero",    "p_up_tail",        "f_tail",
      "f_derivative_tail"};
  return std::find(ids.begin(), ids.end(), law) != ids.end();
}

Tolerance default_tolerance(const std::string& law) {
  Tolerance t;
  if (law == "meander_tail") {
    t.constant = 0.25;
  } else if (law == "passage_t_inf") {
    t.exponent = 0.1;
  } else if (law == "passage_t_zero") {
    t.constant = 0.10;
  } else if (law == "p_up_zero" || law == "p_up_tail") {
    t.exponent = 0.2;
  } else if (law == "f_derivative_tail") {
    t.exponent = 0.1;
    t.constant = 0.10;
  }
  return t;
}

namespace {

struct LawInput {
  const DensityTable* table = nullptr;
  Side side = Side::infinity;
  WindowPolicy window;
  double sign = 1.0;  // measured constant is sign * fitted prefactor
};

class Verifier {
 public:
  Verifier(const StableParams& params, const Artifacts& artifacts,
           const VerifyOptions& options)
      : p_(params), a_(artifacts), options_(options) {}

  AsymptoticReport run();

 private:
  ReportEntry blank(const std::string& law, const std::string& description,
                    double exponent, std::optional<double> constant) const;
  void fit(ReportEntry& entry, const LawInput& in) const;
  static void judge(ReportEntry& entry);
  static void fail(ReportEntry& entry, const std::string& why) {
    entry.verdict = Verdict::fail;
    entry.reason = why;
  }

  const StableParams& p_;
  const Artifacts& a_;
  const VerifyOptions& options_;
};

ReportEntry Verifier::blank(const std::string& law,
                            const std::string& description, double exponent,
                            std::optional<double> constant) const {
  ReportEntry e;
  e.law = law;
  e.description = description;
  e.predicted_exponent = exponent;
  e.predicted_constant = constant;
  const auto it = options_.tolerances.find(law);
  e.tolerance =
      it != options_.tolerances.end() ? it->second : default_tolerance(law);
  return e;
}

void Verifier::fit(ReportEntry& entry, const LawInput& in) const {
  try {
    entry.fit = fit_power_law(*in.table, in.side, in.window);
    const PinnedConstant c = pinned_constant(
        *in.table, entry.predicted_exponent, entry.fit.x_lo, entry.fit.x_hi);
    entry.measured_constant = in.sign * c.constant;
    entry.measured_constant_stderr = c.stderr_constant;
    judge(entry);
  } catch (const Error& err) {
    fail(entry, err.what());
  }
}

void Verifier::judge(ReportEntry& e) {
  std::string why;
  if (!std::isfinite(e.fit.exponent) || !std::isfinite(e.measured_constant)) {
    why = "non-finite fit";
  } else if (std::abs(e.fit.exponent - e.predicted_exponent) >
             e.effective_exponent_tolerance()) {
    why = "exponent off by " +
          std::to_string(e.fit.exponent - e.predicted_exponent);
  } else if (e.predicted_constant) {
    const double rel = e.measured_constant / *e.predicted_constant - 1.0;
    if (!(std::abs(rel) <= e.effective_constant_tolerance())) {
      why = "constant off by " + std::to_string(100.0 * rel) + "%";
    }
  }
  if (why.empty()) {
    e.verdict = Verdict::pass;
  } else {
    fail(e, why);
  }
}

AsymptoticReport Verifier::run() {
  const double alpha = p_.alpha;
  const double rho = p_.rho;
  const double ar = alpha * rho;
  const double A = p_.tail_A;
  const double x = a_.passage_x;
  AsymptoticReport report;
  std::vector<ReportEntry>& out = report.entries;

  // m windows drive the distribution-function and passage laws
  std::optional<std::pair<double, double>> m_zero;
  std::optional<std::pair<double, double>> m_inf;
  try {
    m_zero = automatic_window(a_.m, Side::zero);
    m_inf = automatic_window(a_.m, Side::infinity);
  } catch (const WindowTooNarrow&) {
  }
  std::optional<DensityFn> m_fn;
  std::string m_fn_error;
  try {
    m_fn = supremum_density_fn(a_.m, p_);
  } catch (const Error& err) {
    m_fn_error = err.what();
  }
  const auto m_window = [](const std::optional<std::pair<double, double>>& w) {
    return w ? WindowPolicy::between(w->first, w->second)
             : WindowPolicy::automatic();
  };

  // the m fits come first: later laws compare against the measured B
  ReportEntry tail = blank(
      "sup_density_tail", "m(x) ~ A x^-(alpha+1), x -> inf", -(alpha + 1.0), A);
  ReportEntry zero =
      blank("sup_density_zero", "m(x) ~ B x^(alpha rho - 1), x -> 0", ar - 1.0,
            std::nullopt);
  fit(zero, {&a_.m, Side::zero, m_window(m_zero)});
  const double B =
      zero.verdict == Verdict::pass ? zero.measured_constant : std::nan("");
  const auto given_B = [B](double scale) {
    return std::isfinite(B) ? std::optional(scale * B) : std::nullopt;
  };

  {
    ReportEntry e = blank("sup_survival_tail",
                          "P(S_1 > x) ~ (A/alpha) x^-alpha", -alpha, A / alpha);
    if (m_fn && m_inf) {
      DensityTable surv;
      surv.grid = a_.m.grid;
      const double total = m_fn->mass();
      for (const double y : surv.grid) {
        surv.values.push_back(std::max(total - m_fn->cdf(y), 0.0));
      }
      fit(e, {&surv, Side::infinity, m_window(m_inf)});
    } else {
      fail(e, m_fn ? "no reliable m tail" : m_fn_error);
    }
    out.push_back(std::move(e));
  }
  {
    ReportEntry e =
        blank("sup_cdf_zero", "P(S_1 <= x) ~ (B/(alpha rho)) x^(alpha rho)", ar,
              given_B(1.0 / ar));
    if (m_fn && m_zero) {
      DensityTable cdf;
      cdf.grid = a_.m.grid;
      for (const double y : cdf.grid) {
        cdf.values.push_back(m_fn->cdf(y));
      }
      fit(e, {&cdf, Side::zero, m_window(m_zero)});
    } else {
      fail(e, m_fn ? "no reliable m near zero" : m_fn_error);
    }
    out.push_back(std::move(e));
  }
  fit(tail, {&a_.m, Side::infinity, m_window(m_inf)});
  out.push_back(std::move(tail));
  out.push_back(std::move(zero));
  {
    ReportEntry e = blank("meander_zero", "p~(x) ~ C x^(alpha rho), x -> 0", ar,
                          std::nullopt);
    fit(e, {&a_.ptilde, Side::zero, {}});
    out.push_back(std::move(e));
  }
  {
    ReportEntry e =
        blank("meander_tail", "p~(x) ~ (A/rho) x^-(alpha+1), x -> inf",
              -(alpha + 1.0), A / rho);
    fit(e, {&a_.ptilde, Side::infinity, {}});
    out.push_back(std::move(e));
  }
  {
    ReportEntry e =
        blank("f_at_zero", "f(0+) = D in (0, inf)", 0.0, std::nullopt);
    try {
      const DensityTable f =
          tabulate_density(p_, make_grid(1e-4, 1e-2, 17, GridSpacing::log));
      fit(e, {&f, Side::zero, WindowPolicy::between(1e-4, 1e-2)});
      if (e.verdict == Verdict::pass && !(e.measured_constant > 0.0)) {
        fail(e, "f(0+) is not positive");
      }
    } catch (const Error& err) {
      fail(e, err.what());
    }
    out.push_back(std::move(e));
  }

  // passage density: each m knot y maps to t = (x / y)^alpha
  DensityTable h;
  for (std::size_t i = a_.m.size(); i-- > 0;) {
    const double y = a_.m.grid[i];
    const double t = std::pow(x / y, alpha);
    const double jac = p_.eta * x * std::pow(t, -p_.eta - 1.0);
    h.grid.push_back(t);
    h.values.push_back(jac * a_.m.values[i]);
    if (a_.m.has_errbars()) {
      h.errbars.push_back(jac * a_.m.errbars[i]);
    }
  }
  const auto t_window = [&](const std::optional<std::pair<double, double>>& w) {
    return w ? WindowPolicy::between(std::pow(x / w->second, alpha),
                                     std::pow(x / w->first, alpha))
             : WindowPolicy::automatic();
  };
  {
    ReportEntry e = blank("passage_t_inf",
                          "h_x(t) ~ eta B x^(alpha rho) t^-(rho+1), t -> inf",
                          -(rho + 1.0), given_B(p_.eta * std::pow(x, ar)));
    if (m_zero) {
      fit(e, {&h, Side::infinity, t_window(m_zero)});
    } else {
      fail(e, "no reliable m near zero");
    }
    out.push_back(std::move(e));
  }
  {
    ReportEntry e = blank("passage_t_zero", "h_x(t) -> eta A x^-alpha, t -> 0",
                          0.0, p_.eta * A * std::pow(x, -alpha));
    if (m_inf) {
      fit(e, {&h, Side::zero, t_window(m_inf)});
    } else {
      fail(e, "no reliable m tail");
    }
    out.push_back(std::move(e));
  }
  {
    ReportEntry e =
        blank("p_up_zero", "p_up(x) ~ c x^alpha, x -> 0", alpha, std::nullopt);
    fit(e, {&a_.p_up, Side::zero, {}});
    out.push_back(std::move(e));
  }
  {
    ReportEntry e = blank("p_up_tail", "p_up(x) ~ c x^-(alpha rho+1), x -> inf",
                          -(ar + 1.0), std::nullopt);
    fit(e, {&a_.p_up, Side::infinity, {}});
    out.push_back(std::move(e));
  }

  // f and f' tails on the decade after the tail onset
  {
    ReportEntry f_tail =
        blank("f_tail", "x^(alpha+1) f(x) -> A", -(alpha + 1.0), A);
    ReportEntry df_tail =
        blank("f_derivative_tail", "f'(x) ~ -(alpha+1) A x^-(alpha+2)",
              -(alpha + 2.0), -(alpha + 1.0) * A);
    if (p_.has_positive_jumps()) {
      try {
        const double onset = tail_onset(p_);
        const auto grid = make_grid(onset, 10.0 * onset, 33, GridSpacing::log);
        const DensityTable f = tabulate_density(p_, grid);
        DensityTable df;
        df.grid = grid;
        for (const InversionValue& v : invert_on_grid(p_, grid, 1)) {
          df.values.push_back(-v.value);
        }
        const auto w = WindowPolicy::between(onset, 10.0 * onset);
        fit(f_tail, {&f, Side::infinity, w});
        fit(df_tail, {&df, Side::infinity, w, -1.0});
      } catch (const Error& err) {
        fail(f_tail, err.what());
        fail(df_tail, err.what());
      }
    }
    out.push_back(std::move(f_tail));
    out.push_back(std::move(df_tail));
  }

  if (!p_.has_positive_jumps()) {
    for (ReportEntry& e : out) {
      if (needs_positive_jumps(e.law)) {
        e.verdict = Verdict::skipped;
        e.reason = "no positive jumps";
      }
    }
  }
  return report;
}

}  // namespace

AsymptoticReport verify_all(const StableParams& params,
                            const Artifacts& artifacts,
                            const VerifyOptions& options) {
  return Verifier(params, artifacts, options).run();
}

namespace {

ConstantEstimate interval(double value, double stderr_value) {
  return {value, value - 1.96 * stderr_value, value + 1.96 * stderr_value};
}

std::optional<ConstantEstimate> from_law(const AsymptoticReport& report,
                                         const std::string& law,
                                         double scale = 1.0) {
  const ReportEntry* e = report.find(law);
  if (e == nullptr || e->verdict != Verdict::pass) {
    return std::nullopt;
  }
  return interval(scale * e->measured_constant,
                  std::abs(scale) * e->measured_constant_stderr);
}

}  // namespace

MeasuredConstants estimate_constants(const AsymptoticReport& report,
                                     const StableParams& params,
                                     std::span<const std::string> required) {
  MeasuredConstants c;
  c.A = from_law(report, "sup_density_tail");
  c.B = from_law(report, "sup_density_zero");
  c.C = from_law(report, "meander_zero");
  c.D = from_law(report, "f_at_zero");
  c.B_from_cdf = from_law(report, "sup_cdf_zero", params.alpha * params.rho);
  if (c.A && params.c_plus > 0.0) {
    c.A_ratio = c.A->value / params.c_plus;
  }
  for (const std::string& name : required) {
    const std::optional<ConstantEstimate>* slot = name == "A"   ? &c.A
                                                  : name == "B" ? &c.B
                                                  : name == "C" ? &c.C
                                                  : name == "D" ? &c.D
                                                                : nullptr;
    if (slot == nullptr) {
      throw MissingLaw("unknown constant " + name);
    }
    if (!*slot) {
      throw MissingLaw("constant " + name +
                       " needs a passing law that was skipped or failed");
    }
  }
  return c;
}

void write_report_csv(std::ostream& out, const AsymptoticReport& report) {
  out << "law,predicted_exponent,fitted_exponent,stderr_exponent,"
         "predicted_constant,measured_constant,stderr_constant,x_lo,x_hi,"
         "points,method,tol_exponent,tol_constant,verdict,reason\n";
  std::ostringstream s;
  s << std::setprecision(10);
  for (const ReportEntry& e : report.entries) {
    s.str("");
    s << e.law << ',' << e.predicted_exponent << ',';
    if (e.verdict != Verdict::skipped) {
      s << e.fit.exponent << ',' << e.fit.stderr_exponent;
    } else {
      s << ',';
    }
    s << ',';
    if (e.predicted_constant) {
      s << *e.predicted_constant;
    }
    s << ',';
    if (e.verdict != Verdict::skipped) {
      s << e.measured_constant << ',' << e.measured_constant_stderr << ','
        << e.fit.x_lo << ',' << e.fit.x_hi << ',' << e.fit.points << ','
        << to_string(e.fit.method);
    } else {
      s << ",,,,,";
    }
    s << ',' << e.effective_exponent_tolerance() << ','
      << e.effective_constant_tolerance() << ',' << to_string(e.verdict)
      << ",\"";
    for (const char ch : e.reason) {
      if (ch == '"') {
        s << '"';
      }
      s << ch;
    }
    s << "\"\n";
    out << s.str();
  }
}

void write_report_text(std::ostream& out, const AsymptoticReport& report) {
  std::ostringstream s;
  s << std::left << std::setw(19) << "law" << std::right << std::setw(10)
    << "pred exp" << std::setw(11) << "fit exp" << std::setw(9) << "stderr"
    << std::setw(12) << "pred const" << std::setw(12) << "fit const"
    << std::setw(10) << "stderr" << "  verdict\n";
  s << std::fixed;
  for (const ReportEntry& e : report.entries) {
    s << std::left << std::setw(19) << e.law << std::right
      << std::setprecision(4) << std::setw(10) << e.predicted_exponent;
    if (e.verdict == Verdict::skipped) {
      s << std::setw(11) << "-" << std::setw(9) << "-";
    } else {
      s << std::setw(11) << e.fit.exponent << std::setw(9)
        << e.fit.stderr_exponent;
    }
    if (e.predicted_constant) {
      s << std::setw(12) << *e.predicted_constant;
    } else {
      s << std::setw(12) << "-";
    }
    if (e.verdict == Verdict::skipped) {
      s << std::setw(12) << "-" << std::setw(10) << "-";
    } else {
      s << std::setw(12) << e.measured_constant << std::setw(10)
        << e.measured_constant_stderr;
    }
    s << "  " << to_string(e.verdict);
    if (!e.reason.empty()) {
      s << " (" << e.reason << ")";
    }
    s << '\n';
  }
  out << s.str();
}

}  // namespace supstable
