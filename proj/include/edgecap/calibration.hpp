#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edgecap/model.hpp"

namespace edgecap {

/// Malformed input file. `line()` is 1-based and counts the header.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class CalibrationError : public std::invalid_argument {
 public:
  enum class Kind { too_few_samples, degenerate_design, mixed_platforms };
  CalibrationError(Kind kind, const std::string& what);
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct MeasurementSample {
  std::string platform;
  std::uint32_t side = 0;
  double inference_time = 0.0;  // seconds

  friend bool operator==(const MeasurementSample&, const MeasurementSample&) = default;
};

struct AccuracyPoint {
  std::uint32_t side = 0;
  double mean_accuracy = 0.0;
};

struct FitReport {
  PlatformProfile profile;
  double rmse = 0.0;
  double max_abs_residual = 0.0;
  std::size_t sample_count = 0;
  /// Set when the unconstrained optimum had a negative coefficient.
  bool clamped = false;
};

/// Reads `platform,side_pixels,inference_ms` rows. `#` starts a comment line.
std::vector<MeasurementSample> parse_measurements(std::istream& in);

/// Reads `side_pixels,mean_accuracy` rows.
std::vector<AccuracyPoint> parse_accuracy(std::istream& in);

/// Least-squares fit of inference_time = a + b * side^3 over the samples of
/// one platform.
///
/// Closed-form two-parameter regression on the basis {1, side^3}. When the
/// optimum has a negative coefficient, that coefficient is pinned at zero and
/// the other one is refit, and `clamped` is set on the report.
FitReport fit_platform(std::span<const MeasurementSample> samples);

/// Fitted inference curves of the central server, the Coral Dev Board and
/// the Jetson Nano (constant term in ms, cubic term in ms/px^3 at the source).
std::vector<PlatformProfile> presets();
std::optional<PlatformProfile> find_preset(std::string_view name);

/// Smallest side whose mean accuracy reaches `threshold`.
std::optional<std::uint32_t> select_resolution(std::span<const AccuracyPoint> points,
                                               double threshold);

/// Samples of psi(side) for each side; handy for synthetic fits.
std::vector<MeasurementSample> synthesize_samples(const PlatformProfile& profile,
                                                  std::span<const std::uint32_t> sides);

}  // namespace edgecap
