#include "edgecap/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "edgecap/decimal.hpp"
#include "text.hpp"

namespace edgecap {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

CalibrationError::CalibrationError(Kind kind, const std::string& what)
    : std::invalid_argument(what), kind_(kind) {}

namespace {

std::uint32_t parse_side(std::string_view field, std::size_t line) {
  std::uint32_t side = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), side);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line, "side_pixels is not an integer: '" + std::string(field) + "'");
  }
  if (side == 0) throw ParseError(line, "side_pixels must be >= 1");
  return side;
}

double parse_number(std::string_view field, int shift, std::size_t line, const char* column) {
  try {
    return decimal::parse_scaled(field, shift);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, std::string(column) + " is not numeric: '" + std::string(field) + "'");
  }
}

}  // namespace

std::vector<MeasurementSample> parse_measurements(std::istream& in) {
  std::vector<MeasurementSample> out;
  detail::CsvReader reader(in, "platform,side_pixels,inference_ms");
  while (auto row = reader.next()) {
    const auto& [line, fields] = *row;
    if (fields.size() != 3) {
      throw ParseError(line, "expected 3 columns, found " + std::to_string(fields.size()));
    }
    MeasurementSample sample;
    sample.platform = fields[0];
    if (sample.platform.empty()) throw ParseError(line, "platform is empty");
    sample.side = parse_side(fields[1], line);
    sample.inference_time = parse_number(fields[2], 3, line, "inference_ms");
    if (!std::isfinite(sample.inference_time) || sample.inference_time <= 0.0) {
      throw ParseError(line, "inference_ms must be positive");
    }
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<AccuracyPoint> parse_accuracy(std::istream& in) {
  std::vector<AccuracyPoint> out;
  detail::CsvReader reader(in, "side_pixels,mean_accuracy");
  while (auto row = reader.next()) {
    const auto& [line, fields] = *row;
    if (fields.size() != 2) {
      throw ParseError(line, "expected 2 columns, found " + std::to_string(fields.size()));
    }
    AccuracyPoint point;
    point.side = parse_side(fields[0], line);
    point.mean_accuracy = parse_number(fields[1], 0, line, "mean_accuracy");
    if (!(point.mean_accuracy >= 0.0 && point.mean_accuracy <= 1.0)) {
      throw ParseError(line, "mean_accuracy must lie in [0, 1]");
    }
    out.push_back(point);
  }
  return out;
}

FitReport fit_platform(std::span<const MeasurementSample> samples) {
  using Kind = CalibrationError::Kind;
  if (samples.size() < 2) {
    throw CalibrationError(Kind::too_few_samples, "fit needs at least 2 samples");
  }
  const std::string& name = samples.front().platform;
  std::set<std::uint32_t> sides;
  for (const auto& s : samples) {
    if (s.platform != name) {
      throw CalibrationError(Kind::mixed_platforms,
                             "samples mix platforms '" + name + "' and '" + s.platform + "'");
    }
    sides.insert(s.side);
  }
  if (sides.size() < 2) {
    throw CalibrationError(Kind::degenerate_design, "fit needs at least 2 distinct side values");
  }

  const auto cube = [](std::uint32_t side) {
    const double s = side;
    return s * s * s;
  };
  const double n = static_cast<double>(samples.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& s : samples) {
    mean_x += cube(s.side);
    mean_y += s.inference_time;
  }
  mean_x /= n;
  mean_y /= n;

  // Centered sums keep the normal equations well conditioned for x ~ 1e9.
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dx = cube(s.side) - mean_x;
    sxx += dx * dx;
    sxy += dx * (s.inference_time - mean_y);
  }
  double b = sxy / sxx;
  double a = mean_y - b * mean_x;

  bool clamped = false;
  if (b < 0.0) {
    b = 0.0;
    a = mean_y;
    clamped = true;
  } else if (a < 0.0) {
    double xx = 0.0;
    double xy = 0.0;
    for (const auto& s : samples) {
      xx += cube(s.side) * cube(s.side);
      xy += cube(s.side) * s.inference_time;
    }
    a = 0.0;
    b = xy / xx;
    clamped = true;
  }

  double sse = 0.0;
  double worst = 0.0;
  for (const auto& s : samples) {
    const double r = s.inference_time - (a + b * cube(s.side));
    sse += r * r;
    worst = std::max(worst, std::abs(r));
  }
  return FitReport{PlatformProfile(name, a, b), std::sqrt(sse / n), worst, samples.size(),
                   clamped};
}

std::vector<PlatformProfile> presets() {
  // Source coefficients are ms and ms/px^3; stored here in seconds.
  return {
      PlatformProfile("central-server", 3.23e-3, 9.56e-13),
      PlatformProfile("coral-dev", 20.98e-3, 3.37e-12),
      PlatformProfile("jetson-nano", 41.10e-3, 7.15e-12),
  };
}

std::optional<PlatformProfile> find_preset(std::string_view name) {
  for (auto& p : presets()) {
    if (p.name() == name) return p;
  }
  return std::nullopt;
}

std::optional<std::uint32_t> select_resolution(std::span<const AccuracyPoint> points,
                                               double threshold) {
  std::optional<std::uint32_t> best;
  for (const auto& p : points) {
    if (p.mean_accuracy >= threshold && (!best || p.side < *best)) best = p.side;
  }
  return best;
}

std::vector<MeasurementSample> synthesize_samples(const PlatformProfile& profile,
                                                  std::span<const std::uint32_t> sides) {
  std::vector<MeasurementSample> out;
  out.reserve(sides.size());
  for (auto side : sides) {
    out.push_back({profile.name(), side, inference_latency(profile, side)});
  }
  return out;
}

}  // namespace edgecap
