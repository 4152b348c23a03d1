#include "edgecap/desim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>
#include <vector>

namespace edgecap::desim {

std::string_view to_string(SimMode mode) {
  switch (mode) {
    case SimMode::wireless_only:
      return "wireless";
    case SimMode::compute_only:
      return "compute";
    case SimMode::combined:
      return "combined";
  }
  return "unknown";
}

std::optional<SimMode> parse_mode(std::string_view text) {
  if (text == "wireless" || text == "wireless-only") return SimMode::wireless_only;
  if (text == "compute" || text == "compute-only") return SimMode::compute_only;
  if (text == "combined") return SimMode::combined;
  return std::nullopt;
}

SimConfig::SimConfig(std::size_t ap_count_, std::size_t users_per_ap_, Architecture architecture_,
                     WirelessChannel channel_, PlatformProfile platform_, SimMode mode_)
    : ap_count(ap_count_),
      users_per_ap(users_per_ap_),
      architecture(architecture_),
      channel(channel_),
      platform(std::move(platform_)),
      mode(mode_) {}

void SimConfig::validate() const {
  if (ap_count == 0) throw std::invalid_argument("ap_count must be at least 1");
  if (users_per_ap == 0) throw std::invalid_argument("users_per_ap must be at least 1");
  if (total_users) {
    if (*total_users == 0) throw std::invalid_argument("total_users must be at least 1");
    if (users_per_ap != ::edgecap::users_per_ap(*total_users, ap_count)) {
      throw std::invalid_argument("users_per_ap must equal ceil(total_users / ap_count)");
    }
  }
  if (!std::isfinite(duration) || duration <= 0.0) {
    throw std::invalid_argument("duration must be finite and > 0");
  }
  const double w = warmup_time();
  if (!std::isfinite(w) || w < 0.0 || w >= duration) {
    throw std::invalid_argument("warmup must satisfy 0 <= warmup < duration");
  }
  if (!std::isfinite(start_stagger) || start_stagger < 0.0) {
    throw std::invalid_argument("start stagger must be finite and >= 0");
  }
}

std::size_t SimConfig::user_count() const { return total_users.value_or(ap_count * users_per_ap); }

std::size_t SimConfig::users_on_ap(std::size_t ap) const {
  const std::size_t total = user_count();
  const std::size_t base = total / ap_count;
  const std::size_t extra = total % ap_count;
  return base + (ap < extra ? 1 : 0);
}

std::size_t SimConfig::ap_of(std::size_t ue) const {
  const std::size_t total = user_count();
  const std::size_t base = total / ap_count;
  const std::size_t extra = total % ap_count;
  const std::size_t boundary = extra * (base + 1);
  if (ue < boundary) return ue / (base + 1);
  return extra + (ue - boundary) / base;
}

std::size_t SimConfig::sharers_of_ap(std::size_t ap) const {
  return architecture == Architecture::centralized ? user_count() : users_on_ap(ap);
}

double SimConfig::service_time() const {
  return mode == SimMode::wireless_only ? 0.0 : inference_latency(platform, frame.side());
}

namespace {

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  std::size_t target;
  std::uint64_t generation;

  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    return seq > other.seq;
  }
};

struct Transfer {
  std::size_t ue;
  double remaining_bits;
};

struct Channel {
  std::vector<Transfer> active;
  double last_update = 0.0;
  std::uint64_t generation = 0;
};

struct ProcessingUnit {
  std::deque<std::size_t> fifo;
  std::optional<std::size_t> serving;
};

class Engine {
 public:
  Engine(const SimConfig& config, const SimHooks& hooks)
      : cfg_(config),
        hooks_(hooks),
        rate_(config.channel.goodput()),
        frame_bits_(static_cast<double>(config.frame.size_bits())),
        service_(config.service_time()),
        warmup_(config.warmup_time()),
        channels_(config.ap_count),
        units_(config.architecture == Architecture::centralized ? 1 : config.ap_count),
        frames_(config.user_count()) {}

  SimResult run() {
    const std::size_t users = cfg_.user_count();
    not_started_ = users;
    for (std::size_t ue = 0; ue < users; ++ue) {
      push(static_cast<double>(ue) * cfg_.start_stagger, EventKind::transmit_start, ue);
    }

    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time > cfg_.duration) break;
      events_.pop();
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::transmit_start:
          --not_started_;
          start_transmission(ev.target);
          break;
        case EventKind::channel_completion:
          if (ev.generation == channels_[ev.target].generation) complete_transfers(ev.target);
          break;
        case EventKind::queue_arrival:
          arrivals(ev);
          break;
        case EventKind::service_completion:
          complete_service(ev.target);
          break;
      }
      trace(ev.kind, ev.target);
    }
    return summarize();
  }

 private:
  void push(double time, EventKind kind, std::size_t target, std::uint64_t generation = 0) {
    events_.push(Event{time, seq_++, kind, target, generation});
  }

  void trace(EventKind kind, std::size_t target) {
    if (!hooks_.on_event) return;
    EventTrace t;
    t.time = now_;
    t.kind = kind;
    t.target = target;
    t.transmitting = transmitting_ + not_started_;
    t.in_backhaul = in_backhaul_;
    t.queued = queued_;
    t.in_service = in_service_;
    hooks_.on_event(t);
  }

  std::size_t unit_of(std::size_t ue) const {
    return cfg_.architecture == Architecture::centralized ? 0 : cfg_.ap_of(ue);
  }

  // Time tolerance below which a transfer counts as finished.
  double completion_slack() const {
    return std::max(1e-12, 4.0 * (std::nextafter(now_, INFINITY) - now_));
  }

  void start_transmission(std::size_t ue) {
    FrameRecord& rec = frames_[ue];
    rec = FrameRecord{};
    rec.ue = ue;
    rec.ap = cfg_.ap_of(ue);
    rec.start = now_;
    if (cfg_.mode == SimMode::compute_only) {
      finish_uplink(ue);
      return;
    }
    Channel& ch = channels_[rec.ap];
    advance(ch);
    ch.active.push_back(Transfer{ue, frame_bits_});
    ++transmitting_;
    reschedule(rec.ap);
  }

  void advance(Channel& ch) {
    if (!ch.active.empty()) {
      const double progressed =
          (now_ - ch.last_update) * rate_ / static_cast<double>(ch.active.size());
      for (auto& t : ch.active) {
        t.remaining_bits -= progressed;
        // Overshoot comes only from rounding the event time.
        if (t.remaining_bits < 0.0) t.remaining_bits = 0.0;
      }
    }
    ch.last_update = now_;
  }

  void reschedule(std::size_t ap) {
    Channel& ch = channels_[ap];
    ++ch.generation;
    if (ch.active.empty()) return;
    double min_bits = ch.active.front().remaining_bits;
    for (const auto& t : ch.active) min_bits = std::min(min_bits, t.remaining_bits);
    const double eta = min_bits * static_cast<double>(ch.active.size()) / rate_;
    push(now_ + eta, EventKind::channel_completion, ap, ch.generation);
  }

  void complete_transfers(std::size_t ap) {
    Channel& ch = channels_[ap];
    advance(ch);
    const double n = static_cast<double>(ch.active.size());
    const double slack = completion_slack();
    std::vector<std::size_t> done;
    std::vector<Transfer> still;
    still.reserve(ch.active.size());
    for (const auto& t : ch.active) {
      const double eta = t.remaining_bits * n / rate_;
      if (eta <= slack || now_ + eta == now_) {
        done.push_back(t.ue);
      } else {
        still.push_back(t);
      }
    }
    ch.active = std::move(still);
    transmitting_ -= done.size();
    std::sort(done.begin(), done.end());
    for (auto ue : done) finish_uplink(ue);
    reschedule(ap);
  }

  void finish_uplink(std::size_t ue) {
    FrameRecord& rec = frames_[ue];
    rec.transmit_end = now_;
    ++in_backhaul_;
    push(now_ + cfg_.channel.backhaul(), EventKind::queue_arrival, ue);
  }

  void arrivals(const Event& first) {
    // Simultaneous arrivals join the queue in ascending UE order.
    std::vector<std::size_t> batch{first.target};
    while (!events_.empty() && events_.top().kind == EventKind::queue_arrival &&
           events_.top().time == first.time) {
      batch.push_back(events_.top().target);
      events_.pop();
    }
    std::sort(batch.begin(), batch.end());
    for (auto ue : batch) {
      --in_backhaul_;
      frames_[ue].queue_entry = now_;
      ProcessingUnit& pu = units_[unit_of(ue)];
      pu.fifo.push_back(ue);
      ++queued_;
      if (!pu.serving) start_service(unit_of(ue));
    }
  }

  void start_service(std::size_t unit) {
    ProcessingUnit& pu = units_[unit];
    const std::size_t ue = pu.fifo.front();
    pu.fifo.pop_front();
    --queued_;
    ++in_service_;
    pu.serving = ue;
    frames_[ue].service_start = now_;
    push(now_ + service_, EventKind::service_completion, unit);
  }

  void complete_service(std::size_t unit) {
    ProcessingUnit& pu = units_[unit];
    const std::size_t ue = *pu.serving;
    pu.serving.reset();
    --in_service_;
    FrameRecord& rec = frames_[ue];
    rec.completion = now_;
    if (now_ >= warmup_) record(rec);
    if (!pu.fifo.empty()) start_service(unit);
    start_transmission(ue);
  }

  void record(const FrameRecord& rec) {
    latencies_.push_back(rec.latency());
    sum_transmit_ += rec.transmit_end - rec.start;
    sum_wait_ += rec.service_start - rec.queue_entry;
    sum_service_ += rec.completion - rec.service_start;
    if (hooks_.on_frame) hooks_.on_frame(rec);
  }

  SimResult summarize() {
    SimResult out;
    out.frames_completed = latencies_.size();
    if (latencies_.empty()) {
      out.warning = true;
      return out;
    }
    const double n = static_cast<double>(latencies_.size());
    double sum = 0.0;
    for (double l : latencies_) sum += l;
    out.mean_latency = sum / n;
    out.mean_transmit = sum_transmit_ / n;
    out.mean_queue_wait = sum_wait_ / n;
    out.mean_service = sum_service_ / n;

    std::sort(latencies_.begin(), latencies_.end());
    const auto rank = [&](double q) {
      auto idx = static_cast<std::size_t>(std::ceil(q * n));
      return latencies_[std::clamp<std::size_t>(idx, 1, latencies_.size()) - 1];
    };
    out.p50 = rank(0.50);
    out.p95 = rank(0.95);
    out.max_latency = latencies_.back();
    out.per_user_throughput =
        n / (cfg_.duration - warmup_) / static_cast<double>(cfg_.user_count());
    return out;
  }

  const SimConfig& cfg_;
  const SimHooks& hooks_;
  const double rate_;
  const double frame_bits_;
  const double service_;
  const double warmup_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;

  std::vector<Channel> channels_;
  std::vector<ProcessingUnit> units_;
  std::vector<FrameRecord> frames_;  // frame in flight, per UE

  std::size_t not_started_ = 0;
  std::size_t transmitting_ = 0;
  std::size_t in_backhaul_ = 0;
  std::size_t queued_ = 0;
  std::size_t in_service_ = 0;

  std::vector<double> latencies_;
  double sum_transmit_ = 0.0;
  double sum_wait_ = 0.0;
  double sum_service_ = 0.0;
};

}  // namespace

SimResult run(const SimConfig& config, const SimHooks& hooks) {
  config.validate();
  return Engine(config, hooks).run();
}

double analytical_latency(const SimConfig& config, std::size_t ap) {
  const double backhaul = config.channel.backhaul();
  const double wireless = wireless_latency(config.frame, config.users_on_ap(ap), config.channel);
  const double processing =
      processing_latency(config.platform, config.frame, config.sharers_of_ap(ap));
  switch (config.mode) {
    case SimMode::wireless_only:
      return wireless + backhaul;
    case SimMode::compute_only:
      return processing + backhaul;
    case SimMode::combined:
      return wireless + processing + backhaul;
  }
  return 0.0;
}

Comparison validate_against_model(const SimConfig& config) {
  config.validate();
  Comparison out;
  out.mode = config.mode;
  out.users_per_ap = config.users_per_ap;
  out.total_users = config.user_count();
  out.analytical = analytical_latency(config, 0);

  std::vector<double> expected(config.ap_count);
  for (std::size_t ap = 0; ap < config.ap_count; ++ap) expected[ap] = analytical_latency(config, ap);

  const bool exact = config.mode != SimMode::combined;
  SimHooks hooks;
  hooks.on_frame = [&](const FrameRecord& rec) {
    const double want = expected[rec.ap];
    const double gap = std::abs(rec.latency() - want);
    out.max_frame_rel_gap = std::max(out.max_frame_rel_gap, want > 0.0 ? gap / want : gap);
    if (rec.latency() > want * (1.0 + kBoundRelTolerance) + kBoundAbsTolerance) {
      ++out.bound_violations;
    }
  };
  const SimResult result = run(config, hooks);

  out.frames = result.frames_completed;
  out.simulated_mean = result.mean_latency;
  out.abs_gap = std::abs(out.simulated_mean - out.analytical);
  out.rel_gap = out.analytical > 0.0 ? out.abs_gap / out.analytical : out.abs_gap;
  if (out.frames == 0) {
    out.pass = false;
  } else if (exact) {
    out.pass = out.max_frame_rel_gap <= kExactRelTolerance;
  } else {
    out.pass = out.bound_violations == 0 &&
               out.simulated_mean <= out.analytical * (1.0 + kBoundRelTolerance) + kBoundAbsTolerance;
  }
  return out;
}

}  // namespace edgecap::desim
