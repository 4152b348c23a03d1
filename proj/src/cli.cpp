#include "edgecap/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "edgecap/calibration.hpp"
#include "edgecap/decimal.hpp"
#include "edgecap/desim.hpp"
#include "edgecap/io.hpp"
#include "edgecap/model.hpp"
#include "edgecap/sweep.hpp"

namespace edgecap::cli {
namespace {

using decimal::fixed;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ms(double seconds) { return fixed(seconds * 1e3, 3) + " ms"; }

double parse_quantity(const std::string& text, int shift, const std::string& flag) {
  try {
    return decimal::parse_scaled(text, shift);
  } catch (const std::invalid_argument&) {
    throw UsageError(flag + ": not a number: '" + text + "'");
  }
}

std::uint32_t to_u32(std::uint64_t v, const std::string& flag) {
  if (v > 0xffffffffu) throw UsageError(flag + " is too large");
  return static_cast<std::uint32_t>(v);
}

unsigned thread_budget(std::optional<unsigned> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("EDGECAP_THREADS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw UsageError("EDGECAP_THREADS must be a nonnegative integer");
    }
  }
  return 0;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
}

Architecture architecture_flag(const std::string& text) {
  auto arch = parse_architecture(text);
  if (!arch) throw UsageError("--arch must be centralized or distributed");
  return *arch;
}

// Options naming the processing unit: a preset or a profile file.
struct PlatformFlags {
  std::string preset;
  std::string file;

  void add(CLI::App& app) {
    auto* p = app.add_option("--platform", preset,
                             "Preset platform: central-server, coral-dev, jetson-nano");
    auto* f = app.add_option("--platform-file", file, "Profile JSON written by `fit`");
    p->excludes(f);
  }

  std::optional<PlatformProfile> resolve_optional() const {
    if (!file.empty()) {
      try {
        return io::profile_from_json(io::read_file(file));
      } catch (const std::invalid_argument& ex) {
        throw UsageError(file + ": " + ex.what());
      } catch (const std::exception& ex) {
        throw std::runtime_error(file + ": " + ex.what());
      }
    }
    if (preset.empty()) return std::nullopt;
    auto profile = find_preset(preset);
    if (!profile) throw UsageError("unknown platform '" + preset + "' and no --platform-file");
    return profile;
  }

  PlatformProfile resolve() const {
    auto profile = resolve_optional();
    if (!profile) throw UsageError("one of --platform or --platform-file is required");
    return *profile;
  }
};

struct FrameFlags {
  std::uint64_t side = 600;
  std::uint64_t depth = 8;
  std::string backhaul_ms = "0";

  void add(CLI::App& app) {
    app.add_option("--side", side, "Frame side in pixels")->capture_default_str();
    app.add_option("--depth", depth, "Color depth in bits per pixel")->capture_default_str();
    app.add_option("--backhaul-ms", backhaul_ms, "AP to processing unit latency (ms)")
        ->capture_default_str();
  }
  FrameSpec frame() const {
    try {
      return FrameSpec(to_u32(side, "--side"), to_u32(depth, "--depth"));
    } catch (const std::invalid_argument& ex) {
      throw UsageError(ex.what());
    }
  }
  double backhaul() const { return parse_quantity(backhaul_ms, 3, "--backhaul-ms"); }
};

WirelessChannel channel_from(const std::string& goodput_mbps, double backhaul) {
  try {
    return WirelessChannel(parse_quantity(goodput_mbps, -6, "--goodput-mbps"), backhaul);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
}

// --- analyze -----------------------------------------------------------------

struct AnalyzeFlags {
  std::uint64_t users = 0;
  std::uint64_t aps = 0;
  std::string arch;
  PlatformFlags platform;
  std::string goodput_mbps;
  FrameFlags frame;
  std::string requirement;
  std::string latency_ms;
  bool json = false;
};

int analyze(const AnalyzeFlags& f, std::ostream& out) {
  const PlatformProfile platform = f.platform.resolve();
  const FrameSpec frame = f.frame.frame();
  const WirelessChannel channel = channel_from(f.goodput_mbps, f.frame.backhaul());

  std::optional<Requirement> req;
  if (!f.requirement.empty()) {
    req = find_standard_requirement(f.requirement);
    if (!req) throw UsageError("--requirement must be hr, mr or lr");
  } else if (!f.latency_ms.empty()) {
    try {
      req = Requirement("custom", parse_quantity(f.latency_ms, 3, "--latency-ms"));
    } catch (const std::invalid_argument& ex) {
      throw UsageError(ex.what());
    }
  } else {
    throw UsageError("one of --requirement or --latency-ms is required");
  }

  std::optional<Scenario> scenario;
  try {
    scenario.emplace(f.users, f.aps, architecture_flag(f.arch), channel, platform, frame);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  const RequirementCheck check = check_requirement(*scenario, *req);
  const auto& b = check.breakdown;

  if (f.json) {
    out << "{\n"
        << "  \"users\": " << f.users << ",\n"
        << "  \"aps\": " << f.aps << ",\n"
        << "  \"n_per_ap\": " << check.n_per_ap << ",\n"
        << "  \"n_max\": " << check.n_max << ",\n"
        << "  \"l_wireless_ms\": " << decimal::format_scaled(b.wireless, 3) << ",\n"
        << "  \"l_processing_ms\": " << decimal::format_scaled(b.processing, 3) << ",\n"
        << "  \"l_backhaul_ms\": " << decimal::format_scaled(b.backhaul, 3) << ",\n"
        << "  \"l_total_ms\": " << decimal::format_scaled(b.total, 3) << ",\n"
        << "  \"l_required_ms\": " << decimal::format_scaled(req->l_required(), 3) << ",\n"
        << "  \"satisfied\": " << (check.satisfied ? "true" : "false") << "\n"
        << "}\n";
  } else {
    out << "architecture   " << to_string(scenario->architecture) << '\n'
        << "platform       " << platform.name() << '\n'
        << "users / APs    " << f.users << " / " << f.aps << '\n'
        << "goodput        " << decimal::format_scaled(channel.goodput(), -6) << " Mbps\n"
        << "frame          " << frame.side() << "p x " << frame.color_depth() << " bit ("
        << frame.size_bits() << " bits)\n"
        << "users per AP   " << check.n_per_ap << '\n'
        << "N_max          " << check.n_max << " (" << req->name() << ")\n"
        << "wireless       " << ms(b.wireless) << '\n'
        << "processing     " << ms(b.processing) << '\n'
        << "backhaul       " << ms(b.backhaul) << '\n'
        << "total          " << ms(b.total) << '\n'
        << "required       " << ms(req->l_required()) << '\n'
        << "verdict        " << (check.satisfied ? "satisfied" : "not satisfied") << '\n';
  }
  return check.satisfied ? kSuccess : kUnsatisfied;
}

// --- fit ---------------------------------------------------------------------

struct FitFlags {
  std::string input;
  std::string out;
  std::string only;
  std::string name;
  std::string accuracy;
  double threshold = 0.5;
};

int fit(const FitFlags& f, std::ostream& out) {
  std::vector<MeasurementSample> samples;
  {
    std::istringstream in(io::read_file(f.input));
    try {
      samples = parse_measurements(in);
    } catch (const ParseError& ex) {
      throw std::runtime_error(f.input + ": " + ex.what());
    }
  }
  if (!f.only.empty()) {
    std::erase_if(samples, [&](const MeasurementSample& s) { return s.platform != f.only; });
  }
  FitReport report = [&] {
    try {
      return fit_platform(samples);
    } catch (const CalibrationError& ex) {
      throw std::runtime_error(f.input + ": " + ex.what());
    }
  }();
  if (!f.name.empty()) {
    report.profile = PlatformProfile(f.name, report.profile.a(), report.profile.b());
  }

  out << "platform       " << report.profile.name() << '\n'
      << "samples        " << report.sample_count << '\n'
      << "a              " << decimal::format_scaled(report.profile.a(), 3) << " ms\n"
      << "b              " << decimal::format_scaled(report.profile.b(), 3) << " ms/px^3\n"
      << "rmse           " << decimal::format_scaled(report.rmse, 3) << " ms\n"
      << "max residual   " << decimal::format_scaled(report.max_abs_residual, 3) << " ms\n";
  if (report.clamped) out << "warning        negative coefficient clamped to 0\n";

  if (!f.accuracy.empty()) {
    std::istringstream in(io::read_file(f.accuracy));
    std::vector<AccuracyPoint> points;
    try {
      points = parse_accuracy(in);
    } catch (const ParseError& ex) {
      throw std::runtime_error(f.accuracy + ": " + ex.what());
    }
    const auto side = select_resolution(points, f.threshold);
    out << "resolution     "
        << (side ? std::to_string(*side) + "p" : std::string("none reaches the threshold"))
        << " (accuracy >= " << decimal::format_scaled(f.threshold, 0) << ")\n";
  }

  io::write_file_atomic(f.out, io::profile_to_json(report.profile));
  out << "wrote          " << f.out << '\n';
  return kSuccess;
}

// --- simulate ----------------------------------------------------------------

struct SimFlags {
  std::uint64_t aps = 1;
  std::uint64_t users_per_ap = 0;
  std::optional<std::uint64_t> total_users;
  std::string arch = "centralized";
  PlatformFlags platform;
  std::string goodput_mbps;
  FrameFlags frame;
  std::string mode = "combined";
  std::string duration_s = "1020";
  std::string warmup_s;
  std::string stagger_ms = "0";
  std::string out;
};

desim::SimConfig sim_config(const SimFlags& f) {
  auto mode = desim::parse_mode(f.mode);
  if (!mode) throw UsageError("--mode must be wireless, compute or combined");
  desim::SimConfig cfg(f.aps, f.users_per_ap, architecture_flag(f.arch),
                       channel_from(f.goodput_mbps, f.frame.backhaul()), f.platform.resolve(),
                       *mode);
  cfg.frame = f.frame.frame();
  if (f.total_users) cfg.total_users = *f.total_users;
  cfg.duration = parse_quantity(f.duration_s, 0, "--duration-s");
  if (!f.warmup_s.empty()) cfg.warmup = parse_quantity(f.warmup_s, 0, "--warmup-s");
  cfg.start_stagger = parse_quantity(f.stagger_ms, 3, "--stagger-ms");
  try {
    cfg.validate();
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  return cfg;
}

int simulate(const SimFlags& f, std::ostream& out, std::ostream& err) {
  const desim::SimConfig cfg = sim_config(f);
  const desim::SimResult result = desim::run(cfg);
  if (result.warning) err << "warning: no frame completed inside the measurement window\n";
  const std::string json = io::sim_result_to_json(result);
  if (f.out.empty()) {
    out << json;
  } else {
    io::write_file_atomic(f.out, json);
    out << "frames " << result.frames_completed << ", mean " << ms(result.mean_latency)
        << ", p95 " << ms(result.p95) << ", max " << ms(result.max_latency) << '\n'
        << "wrote " << f.out << '\n';
  }
  return kSuccess;
}

// --- sweep -------------------------------------------------------------------

struct SweepFlags {
  std::vector<std::string> goodputs{"450", "1000"};
  std::string arch = "both";
  std::vector<std::string> platforms;
  std::vector<std::string> platform_files;
  std::vector<std::uint64_t> users;
  std::vector<std::uint64_t> aps;
  FrameFlags frame;
  std::string format;
  std::string out;
  std::optional<unsigned> threads;
  std::vector<std::string> spots;
  std::string spot_out;
  std::string spot_duration_s = "1020";
};

int run_sweep_cmd(const SweepFlags& f, std::ostream& out) {
  sweep::SweepGrid grid = sweep::SweepGrid::defaults();
  grid.frame = f.frame.frame();
  const double backhaul = f.frame.backhaul();
  grid.channels.clear();
  for (const auto& g : f.goodputs) grid.channels.push_back(channel_from(g, backhaul));
  if (f.arch == "both") {
    grid.architectures = {Architecture::centralized, Architecture::distributed};
  } else {
    grid.architectures = {architecture_flag(f.arch)};
  }
  if (!f.platforms.empty() || !f.platform_files.empty()) {
    grid.platforms.clear();
    for (const auto& name : f.platforms) {
      auto p = find_preset(name);
      if (!p) throw UsageError("unknown platform '" + name + "'");
      grid.platforms.push_back(*p);
    }
    for (const auto& file : f.platform_files) {
      PlatformFlags pf;
      pf.file = file;
      grid.platforms.push_back(pf.resolve());
    }
  }
  if (!f.users.empty()) grid.user_counts = f.users;
  if (!f.aps.empty()) grid.ap_counts = f.aps;
  try {
    grid.validate();
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }

  std::string format = f.format;
  if (format.empty()) format = f.out.ends_with(".json") ? "json" : "csv";
  if (format != "csv" && format != "json") throw UsageError("--format must be csv or json");

  const auto cells = sweep::run_sweep(grid, thread_budget(f.threads));
  std::string body;
  if (format == "csv") {
    std::ostringstream csv;
    io::write_sweep_csv(csv, cells);
    body = csv.str();
  } else {
    body = io::sweep_to_json(cells);
  }
  io::write_file_atomic(f.out, body);

  std::map<std::string, std::size_t> tally;
  for (const auto& c : cells) ++tally[c.best.value_or("none")];
  out << "cells " << cells.size();
  for (const auto& req : grid.requirements) out << ", " << req.name() << ' ' << tally[req.name()];
  out << ", none " << tally["none"] << '\n' << "wrote " << f.out << '\n';

  if (f.spots.empty()) return kSuccess;

  std::vector<sweep::AchievabilityCell> selection;
  for (const auto& spot : f.spots) {
    const auto colon = spot.find(':');
    if (colon == std::string::npos) throw UsageError("--spot expects USERS:APS, got '" + spot + "'");
    std::uint64_t u = 0;
    std::uint64_t a = 0;
    try {
      u = std::stoull(spot.substr(0, colon));
      a = std::stoull(spot.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("--spot expects USERS:APS, got '" + spot + "'");
    }
    bool found = false;
    for (const auto& c : cells) {
      if (c.users == u && c.aps == a) {
        selection.push_back(c);
        found = true;
      }
    }
    if (!found) throw UsageError("--spot " + spot + " is not a grid point");
  }
  sweep::SpotSettings settings;
  settings.duration = parse_quantity(f.spot_duration_s, 0, "--spot-duration-s");

  std::vector<sweep::SpotCheck> checks(selection.size());
  parallel_for(selection.size(), thread_budget(f.threads), [&](std::size_t i) {
    checks[i] = sweep::spot_validate(std::span(&selection[i], 1), grid, settings).front();
  });

  bool all_consistent = true;
  for (const auto& s : checks) {
    all_consistent = all_consistent && s.consistent;
    out << "spot " << s.cell.users << ':' << s.cell.aps << ' ' << to_string(s.cell.architecture)
        << ' ' << s.cell.platform << ' ' << decimal::format_scaled(s.cell.goodput, -6) << "Mbps "
        << s.cell.best.value_or("none") << " sim(" << desim::to_string(s.mode)
        << ") " << ms(s.simulated_mean) << " vs budget " << ms(s.budget) << ' '
        << (s.consistent ? "consistent" : "INCONSISTENT") << '\n';
  }
  if (!f.spot_out.empty()) {
    io::write_file_atomic(f.spot_out, io::spot_checks_to_json(checks));
    out << "wrote " << f.spot_out << '\n';
  }
  return all_consistent ? kSuccess : kFailure;
}

// --- validate ----------------------------------------------------------------

struct ValidateFlags {
  std::uint64_t max_users = 10;
  PlatformFlags platform;
  std::string goodput_mbps = "450";
  std::string arch = "centralized";
  std::vector<std::string> modes{"wireless", "compute", "combined"};
  FrameFlags frame;
  std::string duration_s = "1020";
  std::string warmup_s;
  std::string stagger_ms = "0";
  std::string out;
  std::optional<unsigned> threads;
};

int validate(const ValidateFlags& f, std::ostream& out) {
  if (f.max_users == 0) throw UsageError("--max-users must be at least 1");
  std::vector<PlatformProfile> platforms;
  if (auto p = f.platform.resolve_optional()) {
    platforms.push_back(*p);
  } else {
    platforms = presets();
  }
  const WirelessChannel channel = channel_from(f.goodput_mbps, f.frame.backhaul());
  const FrameSpec frame = f.frame.frame();
  const Architecture arch = architecture_flag(f.arch);

  std::vector<desim::SimConfig> configs;
  std::vector<io::ValidationEntry> entries;
  for (const auto& mode_text : f.modes) {
    auto mode = desim::parse_mode(mode_text);
    if (!mode) throw UsageError("--modes accepts wireless, compute, combined");
    // The uplink does not depend on the processing unit.
    const std::size_t platform_count =
        *mode == desim::SimMode::wireless_only ? 1 : platforms.size();
    for (std::size_t p = 0; p < platform_count; ++p) {
      for (std::uint64_t n = 1; n <= f.max_users; ++n) {
        desim::SimConfig cfg(1, n, arch, channel, platforms[p], *mode);
        cfg.frame = frame;
        cfg.duration = parse_quantity(f.duration_s, 0, "--duration-s");
        if (!f.warmup_s.empty()) cfg.warmup = parse_quantity(f.warmup_s, 0, "--warmup-s");
        cfg.start_stagger = parse_quantity(f.stagger_ms, 3, "--stagger-ms");
        try {
          cfg.validate();
        } catch (const std::invalid_argument& ex) {
          throw UsageError(ex.what());
        }
        configs.push_back(cfg);
        entries.push_back({platforms[p].name(), channel.goodput(), arch, {}});
      }
    }
  }

  parallel_for(configs.size(), thread_budget(f.threads), [&](std::size_t i) {
    entries[i].comparison = desim::validate_against_model(configs[i]);
  });

  bool all_pass = true;
  out << "mode      platform        N  analytical_ms  simulated_ms  max_frame_rel_gap  result\n";
  for (const auto& e : entries) {
    const auto& c = e.comparison;
    all_pass = all_pass && c.pass;
    std::string platform = c.mode == desim::SimMode::wireless_only ? "-" : e.platform;
    std::ostringstream line;
    line << std::left;
    line.width(10);
    line << desim::to_string(c.mode);
    line.width(16);
    line << platform;
    line.width(3);
    line << c.users_per_ap;
    line.width(15);
    line << fixed(c.analytical * 1e3, 4);
    line.width(14);
    line << fixed(c.simulated_mean * 1e3, 4);
    line.width(19);
    std::ostringstream gap;
    gap << std::scientific << std::setprecision(2) << c.max_frame_rel_gap;
    line << gap.str();
    line << (c.pass ? "pass" : "FAIL");
    out << line.str() << '\n';
  }
  if (!f.out.empty()) {
    io::write_file_atomic(f.out, io::validation_to_json(entries));
    out << "wrote " << f.out << '\n';
  }
  out << (all_pass ? "validation passed" : "validation FAILED") << '\n';
  return all_pass ? kSuccess : kFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latency and capacity planning for edge-offloaded AR pipelines", "edgecap"};
  app.require_subcommand(1);

  AnalyzeFlags af;
  auto* analyze_cmd = app.add_subcommand("analyze", "Closed-form latency and capacity of a scenario");
  analyze_cmd->add_option("--users", af.users, "Total users")->required();
  analyze_cmd->add_option("--aps", af.aps, "Access points")->required();
  analyze_cmd->add_option("--arch", af.arch, "centralized or distributed")->required();
  af.platform.add(*analyze_cmd);
  analyze_cmd->add_option("--goodput-mbps", af.goodput_mbps, "Channel goodput per AP (Mbps)")
      ->required();
  af.frame.add(*analyze_cmd);
  auto* req_opt =
      analyze_cmd->add_option("--requirement", af.requirement, "Latency class: hr, mr or lr");
  auto* lat_opt = analyze_cmd->add_option("--latency-ms", af.latency_ms, "Custom budget (ms)");
  req_opt->excludes(lat_opt);
  analyze_cmd->add_flag("--json", af.json, "Print the result as JSON");

  FitFlags ff;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a + b*side^3 to inference-time measurements");
  fit_cmd->add_option("--input", ff.input, "Measurement CSV")->required();
  fit_cmd->add_option("--out", ff.out, "Profile JSON to write")->required();
  fit_cmd->add_option("--only", ff.only, "Use only rows of this platform");
  fit_cmd->add_option("--name", ff.name, "Name for the fitted profile");
  fit_cmd->add_option("--accuracy", ff.accuracy, "Accuracy CSV for resolution selection");
  fit_cmd->add_option("--threshold", ff.threshold, "Minimum mean accuracy")->capture_default_str();

  SimFlags sf;
  auto* sim_cmd = app.add_subcommand("simulate", "Closed-loop discrete-event simulation");
  sim_cmd->add_option("--aps", sf.aps, "Access points")->capture_default_str();
  sim_cmd->add_option("--users-per-ap", sf.users_per_ap, "Users on each AP")->required();
  sim_cmd->add_option("--total-users", sf.total_users,
                      "Total users, spread evenly (needs --users-per-ap = ceil(total/aps))");
  sim_cmd->add_option("--arch", sf.arch, "centralized or distributed")->capture_default_str();
  sf.platform.add(*sim_cmd);
  sim_cmd->add_option("--goodput-mbps", sf.goodput_mbps, "Channel goodput per AP (Mbps)")
      ->required();
  sf.frame.add(*sim_cmd);
  sim_cmd->add_option("--mode", sf.mode, "wireless, compute or combined")->capture_default_str();
  sim_cmd->add_option("--duration-s", sf.duration_s, "Simulated horizon (s)")
      ->capture_default_str();
  sim_cmd->add_option("--warmup-s", sf.warmup_s, "Warmup excluded from statistics (s)");
  sim_cmd->add_option("--stagger-ms", sf.stagger_ms, "Start offset per user index (ms)")
      ->capture_default_str();
  sim_cmd->add_option("--out", sf.out, "Result JSON to write (stdout when omitted)");

  SweepFlags wf;
  auto* sweep_cmd = app.add_subcommand("sweep", "Achievability map over users x APs");
  sweep_cmd->add_option("--goodput-mbps", wf.goodputs, "Comma-separated goodputs (Mbps)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--arch", wf.arch, "centralized, distributed or both")
      ->capture_default_str();
  sweep_cmd->add_option("--platforms", wf.platforms, "Comma-separated presets")->delimiter(',');
  sweep_cmd->add_option("--platform-file", wf.platform_files, "Extra profile JSON (repeatable)");
  sweep_cmd->add_option("--users", wf.users, "Comma-separated user counts")->delimiter(',');
  sweep_cmd->add_option("--aps", wf.aps, "Comma-separated AP counts")->delimiter(',');
  wf.frame.add(*sweep_cmd);
  sweep_cmd->add_option("--format", wf.format, "csv or json (default from --out extension)");
  sweep_cmd->add_option("--out", wf.out, "Output file")->required();
  sweep_cmd->add_option("--threads", wf.threads, "Worker threads (0 = auto, default EDGECAP_THREADS)");
  sweep_cmd->add_option("--spot", wf.spots, "Simulate grid point USERS:APS (repeatable)");
  sweep_cmd->add_option("--spot-out", wf.spot_out, "Spot-check JSON to write");
  sweep_cmd->add_option("--spot-duration-s", wf.spot_duration_s, "Simulated horizon (s)")
      ->capture_default_str();

  ValidateFlags vf;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check the simulator against the closed-form model");
  validate_cmd->add_option("--max-users", vf.max_users, "Simulate N = 1..max users on one AP")
      ->capture_default_str();
  vf.platform.add(*validate_cmd);
  validate_cmd->add_option("--goodput-mbps", vf.goodput_mbps, "Channel goodput (Mbps)")
      ->capture_default_str();
  validate_cmd->add_option("--arch", vf.arch, "centralized or distributed")->capture_default_str();
  validate_cmd->add_option("--modes", vf.modes, "Comma-separated modes")
      ->delimiter(',')
      ->capture_default_str();
  vf.frame.add(*validate_cmd);
  validate_cmd->add_option("--duration-s", vf.duration_s, "Simulated horizon (s)")
      ->capture_default_str();
  validate_cmd->add_option("--warmup-s", vf.warmup_s, "Warmup excluded from statistics (s)");
  validate_cmd->add_option("--stagger-ms", vf.stagger_ms, "Start offset per user index (ms)")
      ->capture_default_str();
  validate_cmd->add_option("--out", vf.out, "Comparison JSON to write");
  validate_cmd->add_option("--threads", vf.threads, "Worker threads (0 = auto)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (analyze_cmd->parsed()) return analyze(af, out);
    if (fit_cmd->parsed()) return fit(ff, out);
    if (sim_cmd->parsed()) return simulate(sf, out, err);
    if (sweep_cmd->parsed()) return run_sweep_cmd(wf, out);
    if (validate_cmd->parsed()) return validate(vf, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace edgecap::cli
