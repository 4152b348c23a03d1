#pragma once

// Closed-form latency and capacity model for edge-offloaded AR pipelines.
//
// All times are double-precision seconds, frame sizes are exact integer bits
// and goodputs are bits per second. Unit conversion happens at the I/O edge.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edgecap {

using Bits = std::uint64_t;

enum class Architecture { centralized, distributed };

std::string_view to_string(Architecture arch);
std::optional<Architecture> parse_architecture(std::string_view text);

/// Square video frame of `side` x `side` pixels at `color_depth` bits per pixel.
class FrameSpec {
 public:
  FrameSpec() = default;
  FrameSpec(std::uint32_t side, std::uint32_t color_depth);

  std::uint32_t side() const { return side_; }
  std::uint32_t color_depth() const { return color_depth_; }
  Bits size_bits() const { return Bits{color_depth_} * side_ * side_; }

  friend bool operator==(const FrameSpec&, const FrameSpec&) = default;

 private:
  std::uint32_t side_ = 600;
  std::uint32_t color_depth_ = 8;
};

/// Fitted inference-latency curve of a processing unit: psi(s) = a + b * s^3.
class PlatformProfile {
 public:
  PlatformProfile(std::string name, double a_s, double b_s_per_px3);

  const std::string& name() const { return name_; }
  /// Constant term, seconds.
  double a() const { return a_; }
  /// Cubic term, seconds per cubic pixel.
  double b() const { return b_; }

  friend bool operator==(const PlatformProfile&, const PlatformProfile&) = default;

 private:
  std::string name_;
  double a_;
  double b_;
};

/// Shared uplink of one access point. Goodput is split equally among the
/// active senders; `backhaul` is the fixed AP -> PU forwarding delay.
class WirelessChannel {
 public:
  explicit WirelessChannel(double goodput_bps, double backhaul_s = 0.0);

  double goodput() const { return goodput_; }
  double backhaul() const { return backhaul_; }

  friend bool operator==(const WirelessChannel&, const WirelessChannel&) = default;

 private:
  double goodput_;
  double backhaul_;
};

/// Latency budget of an application class.
class Requirement {
 public:
  Requirement(std::string name, double l_required_s);

  const std::string& name() const { return name_; }
  double l_required() const { return l_required_; }
  /// Minimum framerate implied by the budget: one frame per budget.
  double min_framerate() const { return 1.0 / l_required_; }

  friend bool operator==(const Requirement&, const Requirement&) = default;

  static Requirement high() { return {"HR", 0.016}; }
  static Requirement mid() { return {"MR", 0.100}; }
  static Requirement low() { return {"LR", 0.500}; }

 private:
  std::string name_;
  double l_required_;
};

/// HR, MR, LR in ascending budget order.
std::vector<Requirement> standard_requirements();
std::optional<Requirement> find_standard_requirement(std::string_view name);

/// Ceiling division of users over access points.
std::uint64_t users_per_ap(std::uint64_t total_users, std::uint64_t ap_count);

struct Scenario {
  Scenario(std::uint64_t total_users, std::uint64_t ap_count, Architecture architecture,
           WirelessChannel channel, PlatformProfile platform, FrameSpec frame = {});

  std::uint64_t total_users;
  std::uint64_t ap_count;
  Architecture architecture;
  WirelessChannel channel;
  PlatformProfile platform;
  FrameSpec frame;

  /// Users sharing one AP: ceil(total_users / ap_count).
  std::uint64_t n_per_ap() const { return users_per_ap(total_users, ap_count); }
  /// Users sharing one processing unit.
  std::uint64_t processing_sharers() const;
};

struct LatencyBreakdown {
  double wireless = 0.0;
  double processing = 0.0;
  double backhaul = 0.0;
  double total = 0.0;

  friend bool operator==(const LatencyBreakdown&, const LatencyBreakdown&) = default;
};

Bits frame_size_bits(const FrameSpec& frame);

/// Time to upload one frame while `n_sharers` users share the channel.
double wireless_latency(const FrameSpec& frame, std::uint64_t n_sharers,
                        const WirelessChannel& channel);

/// Per-frame inference time psi(side) = a + b * side^3.
double inference_latency(const PlatformProfile& platform, std::uint32_t side);

/// Inference time of one frame when `sharers` users queue on the same unit.
double processing_latency(const PlatformProfile& platform, const FrameSpec& frame,
                          std::uint64_t sharers);

LatencyBreakdown system_latency(const Scenario& scenario);

/// Largest per-AP user count the channel sustains under the budget:
/// floor(R * L / D).
std::uint64_t max_users(const WirelessChannel& channel, const FrameSpec& frame,
                        const Requirement& req);

struct RequirementCheck {
  bool satisfied = false;
  std::uint64_t n_per_ap = 0;
  std::uint64_t n_max = 0;
  LatencyBreakdown breakdown;
};

RequirementCheck check_requirement(const Scenario& scenario, const Requirement& req);

/// First satisfied requirement of `reqs` (sorted by ascending budget).
std::optional<Requirement> best_requirement(const Scenario& scenario,
                                            std::span<const Requirement> reqs);

}  // namespace edgecap
