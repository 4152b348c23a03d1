#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgecap/desim.hpp"
#include "edgecap/model.hpp"

namespace edgecap::sweep {

struct SweepGrid {
  std::vector<std::uint64_t> user_counts;
  std::vector<std::uint64_t> ap_counts;
  std::vector<Architecture> architectures;
  std::vector<PlatformProfile> platforms;
  std::vector<WirelessChannel> channels;
  FrameSpec frame;
  std::vector<Requirement> requirements;

  void validate() const;

  /// Both architectures, the three presets, 450 Mbps and 1 Gbps, HR/MR/LR,
  /// 600p frames at 8 bits per pixel.
  static SweepGrid defaults();
  static std::vector<std::uint64_t> default_user_counts();
  static std::vector<std::uint64_t> default_ap_counts();

  const PlatformProfile& platform(const std::string& name) const;
};

struct AchievabilityCell {
  std::uint64_t users = 0;
  std::uint64_t aps = 0;
  Architecture architecture = Architecture::centralized;
  std::string platform;
  double goodput = 0.0;  // bits per second
  std::uint64_t n_per_ap = 0;
  LatencyBreakdown breakdown;
  std::optional<std::string> best;

  friend bool operator==(const AchievabilityCell&, const AchievabilityCell&) = default;
};

/// Evaluates every grid point with the analytical model. Output order is
/// row-major over (channel, architecture, platform, users, aps) whatever the
/// thread count; `threads == 0` picks the hardware concurrency.
std::vector<AchievabilityCell> run_sweep(const SweepGrid& grid, unsigned threads = 0);

/// Rebuilds the analytical scenario a cell was evaluated from.
Scenario scenario_for(const AchievabilityCell& cell, const SweepGrid& grid);

/// Position of a requirement name in `reqs`; "none" ranks after all of them.
std::size_t requirement_rank(const std::optional<std::string>& best,
                             std::span<const Requirement> reqs);

struct SpotSettings {
  double duration = 1020.0;
  std::optional<double> warmup;
  double start_stagger = 0.0;
};

struct SpotCheck {
  AchievabilityCell cell;
  desim::SimMode mode = desim::SimMode::combined;
  double simulated_mean = 0.0;  // seconds
  double analytical = 0.0;      // seconds, same mode as the simulation
  /// Budget the simulated mean was compared with.
  double budget = 0.0;
  bool consistent = false;
};

/// Re-runs selected cells through the simulator.
///
/// A cell with a best requirement is simulated with its actual user count
/// and is consistent when the combined-mode mean stays within that budget.
/// A cell with none is checked against the loosest budget in the resource
/// that breaks it: compute-only when processing alone
/// exceeds it, wireless-only when the channel cannot carry the users, and
/// combined otherwise. Such cells are simulated with ceil(users / aps) UEs on
/// every AP and are consistent when the simulated mean also exceeds the budget.
std::vector<SpotCheck> spot_validate(std::span<const AchievabilityCell> cells,
                                     const SweepGrid& grid, const SpotSettings& settings);

}  // namespace edgecap::sweep
