#pragma once

// Deterministic discrete-event simulation of the closed-loop
// UE -> shared uplink -> processing-unit queue pipeline.
//
// Every UE keeps exactly one frame in flight. The uplink of each AP is a
// processor-sharing server of rate R; processing units are FIFO queues with
// constant service time psi(side). A UE starts its next frame the instant
// the previous one finishes service.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "edgecap/model.hpp"

namespace edgecap::desim {

enum class SimMode {
  wireless_only,  // zero service time
  compute_only,   // instantaneous uplink
  combined,
};

std::string_view to_string(SimMode mode);
std::optional<SimMode> parse_mode(std::string_view text);

struct SimConfig {
  SimConfig(std::size_t ap_count, std::size_t users_per_ap, Architecture architecture,
            WirelessChannel channel, PlatformProfile platform, SimMode mode);

  std::size_t ap_count;
  std::size_t users_per_ap;
  /// When set, only this many UEs exist, spread over the APs in contiguous
  /// blocks whose sizes differ by at most one. `users_per_ap` must then equal
  /// ceil(total_users / ap_count).
  std::optional<std::size_t> total_users;
  Architecture architecture;
  FrameSpec frame;
  WirelessChannel channel;  // one per AP
  PlatformProfile platform;
  SimMode mode;
  double duration = 1020.0;
  /// Defaults to 10% of the duration.
  std::optional<double> warmup;
  double start_stagger = 0.0;

  /// Throws std::invalid_argument on a broken invariant.
  void validate() const;

  std::size_t user_count() const;
  double warmup_time() const { return warmup.value_or(0.1 * duration); }
  std::size_t ap_of(std::size_t ue) const;
  /// UEs attached to `ap`.
  std::size_t users_on_ap(std::size_t ap) const;
  /// UEs sharing the processing unit that serves `ap`.
  std::size_t sharers_of_ap(std::size_t ap) const;
  double service_time() const;
};

struct SimResult {
  std::uint64_t frames_completed = 0;
  double mean_latency = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double max_latency = 0.0;
  double mean_transmit = 0.0;
  double mean_queue_wait = 0.0;
  double mean_service = 0.0;
  double per_user_throughput = 0.0;  // frames per second per UE
  /// No frame finished inside the measurement window.
  bool warning = false;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

/// Timeline of one frame. All fields are absolute simulated times.
struct FrameRecord {
  std::size_t ue = 0;
  std::size_t ap = 0;
  double start = 0.0;
  double transmit_end = 0.0;
  double queue_entry = 0.0;
  double service_start = 0.0;
  double completion = 0.0;

  double latency() const { return completion - start; }
};

enum class EventKind { transmit_start, channel_completion, queue_arrival, service_completion };

/// Snapshot taken after each processed event.
struct EventTrace {
  double time = 0.0;
  EventKind kind = EventKind::transmit_start;
  std::size_t target = 0;  // UE for starts/arrivals, AP or PU index otherwise
  std::size_t transmitting = 0;
  std::size_t in_backhaul = 0;
  std::size_t queued = 0;
  std::size_t in_service = 0;

  friend bool operator==(const EventTrace&, const EventTrace&) = default;
};

struct SimHooks {
  /// Called for every frame counted in the statistics.
  std::function<void(const FrameRecord&)> on_frame;
  std::function<void(const EventTrace&)> on_event;
};

SimResult run(const SimConfig& config, const SimHooks& hooks = {});

/// Analytical counterpart of one simulated configuration.
struct Comparison {
  SimMode mode = SimMode::combined;
  std::size_t users_per_ap = 0;
  std::size_t total_users = 0;
  double analytical = 0.0;       // seconds
  double simulated_mean = 0.0;   // seconds
  double abs_gap = 0.0;          // |simulated - analytical|
  double rel_gap = 0.0;          // abs_gap / analytical
  double max_frame_rel_gap = 0.0;
  std::uint64_t bound_violations = 0;
  std::uint64_t frames = 0;
  bool pass = false;
};

/// Relative tolerance for modes with an exact analytical prediction.
inline constexpr double kExactRelTolerance = 1e-9;
/// Floating-point slack on the upper-bound comparisons of combined mode.
inline constexpr double kBoundRelTolerance = 1e-12;
inline constexpr double kBoundAbsTolerance = 1e-12;

/// Analytical per-frame latency prediction for `ap`: the exact steady-state
/// value in the single-resource modes, an upper bound in combined mode.
double analytical_latency(const SimConfig& config, std::size_t ap);

/// Runs the simulation and checks it against the closed-form model.
///
/// Wireless-only and compute-only pass when every frame after warmup matches
/// the prediction within kExactRelTolerance. Combined passes when the mean is
/// at most the analytical total and no frame exceeds its upper bound.
Comparison validate_against_model(const SimConfig& config);

}  // namespace edgecap::desim
