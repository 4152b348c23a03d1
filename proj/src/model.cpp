#include "edgecap/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace edgecap {

std::string_view to_string(Architecture arch) {
  switch (arch) {
    case Architecture::centralized:
      return "centralized";
    case Architecture::distributed:
      return "distributed";
  }
  return "unknown";
}

std::optional<Architecture> parse_architecture(std::string_view text) {
  if (text == "centralized") return Architecture::centralized;
  if (text == "distributed") return Architecture::distributed;
  return std::nullopt;
}

FrameSpec::FrameSpec(std::uint32_t side, std::uint32_t color_depth)
    : side_(side), color_depth_(color_depth) {
  if (side == 0) throw std::invalid_argument("frame side must be at least 1 pixel");
  if (color_depth == 0) throw std::invalid_argument("color depth must be at least 1 bit");
}

PlatformProfile::PlatformProfile(std::string name, double a_s, double b_s_per_px3)
    : name_(std::move(name)), a_(a_s), b_(b_s_per_px3) {
  if (name_.empty()) throw std::invalid_argument("platform name must not be empty");
  if (!std::isfinite(a_) || a_ < 0.0) {
    throw std::invalid_argument("platform '" + name_ + "': constant term must be finite and >= 0");
  }
  if (!std::isfinite(b_) || b_ < 0.0) {
    throw std::invalid_argument("platform '" + name_ + "': cubic term must be finite and >= 0");
  }
}

WirelessChannel::WirelessChannel(double goodput_bps, double backhaul_s)
    : goodput_(goodput_bps), backhaul_(backhaul_s) {
  if (!std::isfinite(goodput_) || goodput_ <= 0.0) {
    throw std::invalid_argument("goodput must be finite and > 0");
  }
  if (!std::isfinite(backhaul_) || backhaul_ < 0.0) {
    throw std::invalid_argument("backhaul latency must be finite and >= 0");
  }
}

Requirement::Requirement(std::string name, double l_required_s)
    : name_(std::move(name)), l_required_(l_required_s) {
  if (!std::isfinite(l_required_) || l_required_ <= 0.0) {
    throw std::invalid_argument("required latency must be finite and > 0");
  }
}

std::vector<Requirement> standard_requirements() {
  return {Requirement::high(), Requirement::mid(), Requirement::low()};
}

std::optional<Requirement> find_standard_requirement(std::string_view name) {
  for (auto& req : standard_requirements()) {
    std::string lower = req.name();
    for (auto& c : lower) c = static_cast<char>(c - 'A' + 'a');
    if (name == req.name() || name == lower) return req;
  }
  return std::nullopt;
}

std::uint64_t users_per_ap(std::uint64_t total_users, std::uint64_t ap_count) {
  if (ap_count == 0) throw std::invalid_argument("ap_count must be at least 1");
  return total_users / ap_count + (total_users % ap_count != 0 ? 1 : 0);
}

Scenario::Scenario(std::uint64_t total_users_, std::uint64_t ap_count_, Architecture architecture_,
                   WirelessChannel channel_, PlatformProfile platform_, FrameSpec frame_)
    : total_users(total_users_),
      ap_count(ap_count_),
      architecture(architecture_),
      channel(channel_),
      platform(std::move(platform_)),
      frame(frame_) {
  if (total_users == 0) throw std::invalid_argument("scenario needs at least 1 user");
  if (ap_count == 0) throw std::invalid_argument("scenario needs at least 1 access point");
}

std::uint64_t Scenario::processing_sharers() const {
  return architecture == Architecture::centralized ? total_users : n_per_ap();
}

Bits frame_size_bits(const FrameSpec& frame) { return frame.size_bits(); }

double wireless_latency(const FrameSpec& frame, std::uint64_t n_sharers,
                        const WirelessChannel& channel) {
  return static_cast<double>(frame.size_bits()) * static_cast<double>(n_sharers) /
         channel.goodput();
}

double inference_latency(const PlatformProfile& platform, std::uint32_t side) {
  const double s = side;
  return platform.a() + platform.b() * (s * s * s);
}

double processing_latency(const PlatformProfile& platform, const FrameSpec& frame,
                          std::uint64_t sharers) {
  return inference_latency(platform, frame.side()) * static_cast<double>(sharers);
}

LatencyBreakdown system_latency(const Scenario& scenario) {
  LatencyBreakdown out;
  out.wireless = wireless_latency(scenario.frame, scenario.n_per_ap(), scenario.channel);
  out.processing =
      processing_latency(scenario.platform, scenario.frame, scenario.processing_sharers());
  out.backhaul = scenario.channel.backhaul();
  out.total = out.wireless + out.processing + out.backhaul;
  return out;
}

std::uint64_t max_users(const WirelessChannel& channel, const FrameSpec& frame,
                        const Requirement& req) {
  const double budget_bits = channel.goodput() * req.l_required();
  const double frame_bits = static_cast<double>(frame.size_bits());
  const double ratio = std::floor(budget_bits / frame_bits);
  constexpr double cap = 9.0e18;
  if (ratio >= cap) return static_cast<std::uint64_t>(cap);

  // The quotient may land one off after rounding; settle on the integer that
  // satisfies n * D <= R * L < (n + 1) * D under the same double products.
  auto n = static_cast<std::uint64_t>(ratio);
  while (static_cast<double>(n + 1) * frame_bits <= budget_bits) ++n;
  while (n > 0 && static_cast<double>(n) * frame_bits > budget_bits) --n;
  return n;
}

RequirementCheck check_requirement(const Scenario& scenario, const Requirement& req) {
  RequirementCheck out;
  out.n_per_ap = scenario.n_per_ap();
  out.n_max = max_users(scenario.channel, scenario.frame, req);
  out.breakdown = system_latency(scenario);
  out.satisfied = out.n_per_ap <= out.n_max && out.breakdown.total <= req.l_required();
  return out;
}

std::optional<Requirement> best_requirement(const Scenario& scenario,
                                            std::span<const Requirement> reqs) {
  for (const auto& req : reqs) {
    if (check_requirement(scenario, req).satisfied) return req;
  }
  return std::nullopt;
}

}  // namespace edgecap
