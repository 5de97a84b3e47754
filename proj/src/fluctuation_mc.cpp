#include "supstable/fluctuation_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "supstable/csv.hpp"
#include "supstable/errors.hpp"
#include "supstable/rng.hpp"
#include "supstable/stable_core.hpp"

namespace supstable {

namespace {

constexpr std::uint64_t kBlockPaths = 4096;
constexpr std::uint64_t kMeanderRoundBlocks = 64;
constexpr double kMinAcceptance = 1e-4;

// Stream ids: the top byte separates simulation kinds so a supremum and a
// meander run under one seed never share random numbers.
constexpr std::uint64_t kSupremumDomain = std::uint64_t{1} << 56;
constexpr std::uint64_t kMeanderDomain = std::uint64_t{2} << 56;

unsigned worker_count(unsigned requested, std::size_t tasks) {
  unsigned n = requested == 0 ? std::thread::hardware_concurrency() : requested;
  n = std::max(n, 1u);
  return static_cast<unsigned>(std::min<std::size_t>(n, tasks));
}

// Runs task(i) for i in [0, count). Tasks write to disjoint slots, so the
// result never depends on which thread ran what.
template <class Task>
void run_blocks(std::size_t count, unsigned threads, Task&& task) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) {
        return;
      }
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(count);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) {
    pool.emplace_back(work);
  }
  work();
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

struct Skeleton {
  int finest = 0;
  std::vector<int> strides;  // coarse to fine; finest stride is 1
  double step_scale = 0.0;
};

Skeleton make_skeleton(const StableParams& params, const MCConfig& cfg,
                       const std::vector<int>& levels) {
  Skeleton sk;
  sk.finest = levels.back();
  for (int level : levels) {
    sk.strides.push_back(sk.finest / level);
  }
  sk.step_scale = std::pow(cfg.horizon / sk.finest, params.eta);
  return sk;
}

std::vector<MCRun> empty_runs(const StableParams& params, const MCConfig& cfg,
                              const std::vector<int>& levels, bool meander) {
  std::vector<MCRun> runs(levels.size());
  for (std::size_t l = 0; l < levels.size(); ++l) {
    runs[l].config = cfg;
    runs[l].level = levels[l];
    runs[l].meander = meander;
    runs[l].mesh_scale = std::pow(cfg.horizon / levels[l], params.eta);
  }
  return runs;
}

std::vector<MCRun> supremum_runs(const StableParams& params,
                                 const MCConfig& cfg,
                                 const std::vector<int>& levels) {
  check_config(cfg);
  const Skeleton sk = make_skeleton(params, cfg, levels);
  const StableSampler sampler(params);
  const std::size_t n_levels = levels.size();

  std::vector<MCRun> runs = empty_runs(params, cfg, levels, false);
  std::vector<std::vector<double>*> maxima(n_levels);
  for (std::size_t l = 0; l < n_levels; ++l) {
    runs[l].samples.assign(cfg.n_paths, 0.0);
    runs[l].attempted = cfg.n_paths;
    maxima[l] = &runs[l].samples;
  }
  std::vector<double> endpoints(cfg.n_paths, 0.0);

  const std::size_t blocks = (cfg.n_paths + kBlockPaths - 1) / kBlockPaths;
  run_blocks(blocks, cfg.threads, [&](std::size_t b) {
    PhiloxStream stream(cfg.seed, kSupremumDomain | b);
    const std::uint64_t first = b * kBlockPaths;
    const std::uint64_t last = std::min(first + kBlockPaths, cfg.n_paths);
    std::vector<double> best(n_levels);
    for (std::uint64_t p = first; p < last; ++p) {
      std::fill(best.begin(), best.end(), 0.0);
      double s = 0.0;
      for (int k = 1; k <= sk.finest; ++k) {
        s += sampler(stream, sk.step_scale);
        for (std::size_t l = 0; l < n_levels; ++l) {
          if (k % sk.strides[l] == 0 && s > best[l]) {
            best[l] = s;
          }
        }
      }
      for (std::size_t l = 0; l < n_levels; ++l) {
        (*maxima[l])[p] = best[l];
      }
      endpoints[p] = s;
    }
  });

  for (std::size_t l = 0; l + 1 < n_levels; ++l) {
    runs[l].endpoints = endpoints;
  }
  runs.back().endpoints = std::move(endpoints);
  return runs;
}

std::vector<MCRun> meander_runs(const StableParams& params, const MCConfig& cfg,
                                const std::vector<int>& levels) {
  check_config(cfg);
  const Skeleton sk = make_skeleton(params, cfg, levels);
  const StableSampler sampler(params);
  const std::size_t n_levels = levels.size();

  std::vector<MCRun> runs = empty_runs(params, cfg, levels, true);
  std::uint64_t attempted = 0;
  std::uint64_t next_block = 0;
  for (;;) {
    std::vector<std::vector<std::vector<double>>> kept(
        kMeanderRoundBlocks, std::vector<std::vector<double>>(n_levels));
    run_blocks(kMeanderRoundBlocks, cfg.threads, [&](std::size_t i) {
      PhiloxStream stream(cfg.seed, kMeanderDomain | (next_block + i));
      std::vector<char> alive(n_levels);
      for (std::uint64_t p = 0; p < kBlockPaths; ++p) {
        std::fill(alive.begin(), alive.end(), 1);
        double s = 0.0;
        for (int k = 1; k <= sk.finest; ++k) {
          s += sampler(stream, sk.step_scale);
          for (std::size_t l = 0; l < n_levels; ++l) {
            if (alive[l] && k % sk.strides[l] == 0 && !(s > 0.0)) {
              alive[l] = 0;
            }
          }
          // the coarsest grid is a subset of every finer one
          if (!alive[0]) {
            break;
          }
        }
        for (std::size_t l = 0; l < n_levels; ++l) {
          if (alive[l]) {
            kept[i][l].push_back(s);
          }
        }
      }
    });
    for (std::size_t i = 0; i < kMeanderRoundBlocks; ++i) {
      for (std::size_t l = 0; l < n_levels; ++l) {
        auto& dst = runs[l].samples;
        dst.insert(dst.end(), kept[i][l].begin(), kept[i][l].end());
      }
    }
    next_block += kMeanderRoundBlocks;
    attempted += kMeanderRoundBlocks * kBlockPaths;

    const double rate =
        static_cast<double>(runs.back().samples.size()) / attempted;
    if (rate < kMinAcceptance) {
      throw RejectionStarvation(
          "meander acceptance rate " + std::to_string(rate) + " at " +
          std::to_string(sk.finest) +
          " steps is below 1e-4; reduce the number of steps");
    }
    if (attempted >= cfg.n_paths &&
        runs.back().samples.size() >= cfg.min_accepted) {
      break;
    }
  }
  for (auto& run : runs) {
    run.attempted = attempted;
    run.acceptance_rate = static_cast<double>(run.samples.size()) / attempted;
  }
  return runs;
}

}  // namespace

void check_config(const MCConfig& cfg) {
  if (cfg.n_paths < 1) {
    throw ConfigError("n_paths must be at least 1");
  }
  if (cfg.n_steps < 2) {
    throw ConfigError("n_steps must be at least 2");
  }
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
    throw ConfigError("horizon must be positive and finite");
  }
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    if (cfg.levels[i] < 2) {
      throw ConfigError("every level must be at least 2");
    }
    if (i > 0 && (cfg.levels[i] <= cfg.levels[i - 1] ||
                  cfg.levels[i] % cfg.levels[i - 1] != 0)) {
      throw ConfigError(
          "levels must be strictly increasing, each a multiple of the "
          "previous");
    }
  }
}

MCRun simulate_supremum(const StableParams& params, const MCConfig& cfg) {
  return std::move(supremum_runs(params, cfg, {cfg.n_steps}).front());
}

std::vector<MCRun> simulate_supremum_levels(const StableParams& params,
                                            const MCConfig& cfg) {
  if (cfg.levels.empty()) {
    throw ConfigError("levels must not be empty");
  }
  return supremum_runs(params, cfg, cfg.levels);
}

MCRun simulate_meander(const StableParams& params, const MCConfig& cfg) {
  return std::move(meander_runs(params, cfg, {cfg.n_steps}).front());
}

std::vector<MCRun> simulate_meander_levels(const StableParams& params,
                                           const MCConfig& cfg) {
  if (cfg.levels.empty()) {
    throw ConfigError("levels must not be empty");
  }
  return meander_runs(params, cfg, cfg.levels);
}

void write_runs_csv(std::ostream& out, std::span<const MCRun> runs) {
  out << "value,level,seed\n";
  std::string line;
  for (const MCRun& run : runs) {
    const std::string tail = "," + std::to_string(run.level) + "," +
                             std::to_string(run.config.seed) + "\n";
    for (double v : run.samples) {
      line.clear();
      append_number(line, v);
      line += tail;
      out << line;
    }
  }
}

DensityTable estimate_p_up(const StableParams& params,
                           const DensityTable& ptilde) {
  check_table(ptilde);
  if (ptilde.size() < 2 || !(ptilde.grid.front() > 0.0)) {
    throw std::invalid_argument("p_up needs a positive grid of 2+ points");
  }
  const double power = params.alpha * (1.0 - params.rho);
  DensityTable out = ptilde;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = std::pow(out.grid[i], power);
    out.values[i] *= w;
    if (out.has_errbars()) {
      out.errbars[i] *= w;
    }
  }
  const double mass = trapezoid_mass(out);
  const std::size_t n = out.size();
  const double last_interval = 0.5 * (out.values[n - 1] + out.values[n - 2]) *
                               (out.grid[n - 1] - out.grid[n - 2]);
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw NonNormalizable("weighted meander table has no finite mass");
  }
  if (n > 2 && last_interval > 0.5 * mass) {
    throw NonNormalizable(
        "weighted meander table puts most of its mass in the last grid cell; "
        "the meander tail is too heavy");
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] /= mass;
    if (out.has_errbars()) {
      out.errbars[i] /= mass;
    }
  }
  out.meta.config += " weighted x^" + std::to_string(power);
  return out;
}

}  // namespace supstable
