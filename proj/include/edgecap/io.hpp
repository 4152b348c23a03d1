#pragma once

// File formats. Latencies are written in milliseconds and goodputs in Mbps;
// the conversion moves the decimal point of the shortest round-trip
// representation, so every emitted file parses back to bit-identical values.

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edgecap/desim.hpp"
#include "edgecap/model.hpp"
#include "edgecap/sweep.hpp"

namespace edgecap::io {

/// `{ "name": ..., "a_ms": ..., "b_ms_per_px3": ... }`
std::string profile_to_json(const PlatformProfile& profile);
PlatformProfile profile_from_json(std::string_view text);

std::string sim_result_to_json(const desim::SimResult& result);
desim::SimResult sim_result_from_json(std::string_view text);

inline constexpr std::string_view kSweepCsvHeader =
    "users,aps,architecture,platform,goodput_mbps,n_per_ap,l_wireless_ms,l_processing_ms,"
    "l_backhaul_ms,l_total_ms,best_requirement";

void write_sweep_csv(std::ostream& out, std::span<const sweep::AchievabilityCell> cells);
std::vector<sweep::AchievabilityCell> parse_sweep_csv(std::istream& in);

/// JSON array of objects keyed like the CSV columns.
std::string sweep_to_json(std::span<const sweep::AchievabilityCell> cells);
std::vector<sweep::AchievabilityCell> sweep_from_json(std::string_view text);

/// One simulated point of a validation run.
struct ValidationEntry {
  std::string platform;
  double goodput = 0.0;
  Architecture architecture = Architecture::centralized;
  desim::Comparison comparison;
};

std::string validation_to_json(std::span<const ValidationEntry> entries);
std::vector<ValidationEntry> validation_from_json(std::string_view text);

std::string spot_checks_to_json(std::span<const sweep::SpotCheck> checks);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace edgecap::io
