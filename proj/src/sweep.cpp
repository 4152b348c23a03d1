#include "edgecap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "edgecap/calibration.hpp"

namespace edgecap::sweep {

void SweepGrid::validate() const {
  if (user_counts.empty() || ap_counts.empty() || architectures.empty() || platforms.empty() ||
      channels.empty() || requirements.empty()) {
    throw std::invalid_argument("sweep grid lists must all be nonempty");
  }
  for (auto u : user_counts) {
    if (u == 0) throw std::invalid_argument("user counts must be >= 1");
  }
  for (auto a : ap_counts) {
    if (a == 0) throw std::invalid_argument("AP counts must be >= 1");
  }
  for (std::size_t i = 1; i < requirements.size(); ++i) {
    if (requirements[i].l_required() < requirements[i - 1].l_required()) {
      throw std::invalid_argument("requirements must be sorted by ascending budget");
    }
  }
}

std::vector<std::uint64_t> SweepGrid::default_user_counts() {
  return {2, 10, 25, 50, 100, 200, 400, 700, 1000, 1400};
}

std::vector<std::uint64_t> SweepGrid::default_ap_counts() {
  return {1, 3, 5, 10, 21, 35, 53, 70, 88, 105};
}

SweepGrid SweepGrid::defaults() {
  return SweepGrid{
      default_user_counts(),
      default_ap_counts(),
      {Architecture::centralized, Architecture::distributed},
      presets(),
      {WirelessChannel(450e6), WirelessChannel(1e9)},
      FrameSpec(600, 8),
      standard_requirements(),
  };
}

const PlatformProfile& SweepGrid::platform(const std::string& name) const {
  for (const auto& p : platforms) {
    if (p.name() == name) return p;
  }
  throw std::invalid_argument("platform '" + name + "' is not part of the grid");
}

namespace {

struct Point {
  std::size_t channel;
  Architecture architecture;
  std::size_t platform;
  std::uint64_t users;
  std::uint64_t aps;
};

AchievabilityCell evaluate(const SweepGrid& grid, const Point& p) {
  const Scenario scenario(p.users, p.aps, p.architecture, grid.channels[p.channel],
                          grid.platforms[p.platform], grid.frame);
  AchievabilityCell cell;
  cell.users = p.users;
  cell.aps = p.aps;
  cell.architecture = p.architecture;
  cell.platform = grid.platforms[p.platform].name();
  cell.goodput = grid.channels[p.channel].goodput();
  cell.n_per_ap = scenario.n_per_ap();
  cell.breakdown = system_latency(scenario);
  if (auto best = best_requirement(scenario, grid.requirements)) cell.best = best->name();
  return cell;
}

}  // namespace

std::vector<AchievabilityCell> run_sweep(const SweepGrid& grid, unsigned threads) {
  grid.validate();
  std::vector<Point> points;
  for (std::size_t c = 0; c < grid.channels.size(); ++c) {
    for (auto arch : grid.architectures) {
      for (std::size_t p = 0; p < grid.platforms.size(); ++p) {
        for (auto u : grid.user_counts) {
          for (auto a : grid.ap_counts) points.push_back({c, arch, p, u, a});
        }
      }
    }
  }

  std::vector<AchievabilityCell> cells(points.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) cells[i] = evaluate(grid, points[i]);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return cells;
}

Scenario scenario_for(const AchievabilityCell& cell, const SweepGrid& grid) {
  return Scenario(cell.users, cell.aps, cell.architecture,
                  WirelessChannel(cell.goodput, cell.breakdown.backhaul),
                  grid.platform(cell.platform), grid.frame);
}

std::size_t requirement_rank(const std::optional<std::string>& best,
                             std::span<const Requirement> reqs) {
  if (!best) return reqs.size();
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    if (reqs[i].name() == *best) return i;
  }
  throw std::invalid_argument("unknown requirement '" + *best + "'");
}

std::vector<SpotCheck> spot_validate(std::span<const AchievabilityCell> cells,
                                     const SweepGrid& grid, const SpotSettings& settings) {
  std::vector<SpotCheck> out;
  out.reserve(cells.size());
  for (const auto& cell : cells) {
    const Scenario scenario = scenario_for(cell, grid);
    const Requirement& loosest = grid.requirements.back();

    SpotCheck check;
    check.cell = cell;
    if (cell.best) {
      check.mode = desim::SimMode::combined;
      check.budget = grid.requirements[requirement_rank(cell.best, grid.requirements)].l_required();
    } else {
      check.budget = loosest.l_required();
      if (cell.breakdown.processing > loosest.l_required()) {
        check.mode = desim::SimMode::compute_only;
      } else if (cell.n_per_ap > max_users(scenario.channel, scenario.frame, loosest)) {
        check.mode = desim::SimMode::wireless_only;
      } else {
        check.mode = desim::SimMode::combined;
      }
    }

    desim::SimConfig config(cell.aps, cell.n_per_ap, cell.architecture, scenario.channel,
                            scenario.platform, check.mode);
    // A satisfied cell is simulated with its real population; a failing one
    // replicates its most loaded AP on every AP.
    if (cell.best) config.total_users = cell.users;
    config.frame = grid.frame;
    config.duration = settings.duration;
    config.warmup = settings.warmup;
    config.start_stagger = settings.start_stagger;

    const desim::SimResult result = desim::run(config);
    check.simulated_mean = result.mean_latency;
    check.analytical = desim::analytical_latency(config, 0);
    if (result.frames_completed == 0) {
      // Nothing finished inside the window: every frame overran it.
      check.consistent = !cell.best.has_value();
    } else if (cell.best) {
      check.consistent = check.simulated_mean <= check.budget;
    } else {
      check.consistent = check.simulated_mean > check.budget;
    }
    out.push_back(std::move(check));
  }
  return out;
}

}  // namespace edgecap::sweep
