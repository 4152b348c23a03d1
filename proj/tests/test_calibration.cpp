#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "edgecap/calibration.hpp"

using namespace edgecap;

namespace {

const std::vector<std::uint32_t> kSides{100, 200, 300, 500, 800, 1000};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double sse(const std::vector<MeasurementSample>& samples, double a, double b) {
  double total = 0.0;
  for (const auto& s : samples) {
    const double x = static_cast<double>(s.side);
    const double r = s.inference_time - (a + b * x * x * x);
    total += r * r;
  }
  return total;
}

std::vector<MeasurementSample> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_measurements(in);
}

}  // namespace

TEST_CASE("parse_measurements") {
  SUBCASE("one row") {
    const auto rows = parse("platform,side_pixels,inference_ms\ncoral,300,21.07\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].platform == "coral");
    CHECK(rows[0].side == 300);
    CHECK(rows[0].inference_time == 0.02107);
  }
  SUBCASE("header only") { CHECK(parse("platform,side_pixels,inference_ms\n").empty()); }
  SUBCASE("comments, blank lines and CRLF") {
    const auto rows =
        parse("# bench\r\nplatform,side_pixels,inference_ms\r\n\r\n# note\r\nnano, 500 ,42\r\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].side == 500);
    CHECK(rows[0].inference_time == 0.042);
  }
  SUBCASE("non-numeric side names the line") {
    try {
      parse("platform,side_pixels,inference_ms\ncoral,abc,5\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("other rejections") {
    const std::string header = "platform,side_pixels,inference_ms\n";
    for (const char* row : {"coral,300\n", "coral,300,1,2\n", "coral,0,5\n", "coral,300,-1\n",
                            "coral,300,0\n", "coral,300,x\n", ",300,1\n"}) {
      CAPTURE(row);
      CHECK_THROWS_AS(parse(header + "coral,100,1\n" + row), ParseError);
      try {
        parse(header + "coral,100,1\n" + row);
      } catch (const ParseError& e) {
        CHECK(e.line() == 3);
      }
    }
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("side,ms\n"), ParseError);
  }
}

TEST_CASE("parse_accuracy") {
  std::istringstream in("side_pixels,mean_accuracy\n100,0.2\n500,0.61\n");
  const auto points = parse_accuracy(in);
  REQUIRE(points.size() == 2);
  CHECK(points[1].side == 500);
  CHECK(points[1].mean_accuracy == 0.61);
  std::istringstream bad("side_pixels,mean_accuracy\n100,1.2\n");
  CHECK_THROWS_AS(parse_accuracy(bad), ParseError);
}

TEST_CASE("presets hold the fitted table values") {
  const auto all = presets();
  REQUIRE(all.size() == 3);
  CHECK(find_preset("central-server")->a() == 3.23e-3);
  CHECK(find_preset("central-server")->b() == 9.56e-13);
  CHECK(find_preset("coral-dev")->a() == 20.98e-3);
  CHECK(find_preset("coral-dev")->b() == 3.37e-12);
  CHECK(find_preset("jetson-nano")->a() == 41.10e-3);
  CHECK(find_preset("jetson-nano")->b() == 7.15e-12);
  CHECK_FALSE(find_preset("tpu"));
  for (const auto& p : all) {
    const double psi = inference_latency(p, 600);
    CHECK(psi > 0.0);
    CHECK(psi < 0.1);
  }
}

TEST_CASE("fit recovers the generating coefficients") {
  for (const auto& p : presets()) {
    CAPTURE(p.name());
    const auto report = fit_platform(synthesize_samples(p, kSides));
    CHECK(rel_err(report.profile.a(), p.a()) < 1e-9);
    CHECK(rel_err(report.profile.b(), p.b()) < 1e-9);
    CHECK(report.profile.name() == p.name());
    CHECK(report.sample_count == kSides.size());
    CHECK(report.rmse <= report.max_abs_residual);
    CHECK_FALSE(report.clamped);
  }
}

TEST_CASE("two points interpolate exactly") {
  const double a = 0.02098;
  const double b = 3.37e-12;
  const std::vector<MeasurementSample> s{{"coral", 100, a + b * 1e6}, {"coral", 1000, a + b * 1e9}};
  const auto report = fit_platform(s);
  CHECK(report.rmse == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rel_err(report.profile.a(), a) < 1e-12);
  CHECK(rel_err(report.profile.b(), b) < 1e-9);
}

TEST_CASE("fit input errors") {
  using Kind = CalibrationError::Kind;
  const std::vector<MeasurementSample> same{{"c", 300, 0.02}, {"c", 300, 0.021}, {"c", 300, 0.03}};
  try {
    fit_platform(same);
    FAIL("expected degenerate design");
  } catch (const CalibrationError& e) {
    CHECK(e.kind() == Kind::degenerate_design);
  }
  const std::vector<MeasurementSample> mixed{{"c", 100, 0.02}, {"j", 300, 0.04}};
  try {
    fit_platform(mixed);
    FAIL("expected mixed platforms");
  } catch (const CalibrationError& e) {
    CHECK(e.kind() == Kind::mixed_platforms);
  }
  const std::vector<MeasurementSample> one{{"c", 100, 0.02}};
  CHECK_THROWS_AS(fit_platform(one), CalibrationError);
}

TEST_CASE("negative optimum is clamped") {
  // Decreasing times: the free optimum has b < 0.
  const std::vector<MeasurementSample> down{{"x", 100, 0.03}, {"x", 500, 0.02}, {"x", 900, 0.01}};
  const auto r = fit_platform(down);
  CHECK(r.clamped);
  CHECK(r.profile.b() == 0.0);
  CHECK(r.profile.a() == doctest::Approx(0.02));
  // Steep growth from near zero: the free optimum has a < 0.
  const std::vector<MeasurementSample> steep{
      {"y", 100, 1e-6}, {"y", 200, 1e-6}, {"y", 900, 0.5}, {"y", 1000, 0.7}};
  const auto s = fit_platform(steep);
  CHECK(s.clamped);
  CHECK(s.profile.a() == 0.0);
  CHECK(s.profile.b() > 0.0);
}

TEST_CASE("fit properties") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef_a(0.0, 0.1);
  std::uniform_real_distribution<double> coef_b(1e-14, 1e-10);
  std::uniform_real_distribution<double> noise(-1e-3, 1e-3);
  std::uniform_real_distribution<double> scale(0.01, 100.0);

  for (int i = 0; i < 200; ++i) {
    const PlatformProfile truth("p", coef_a(rng), coef_b(rng));
    // Idempotence on exact data.
    const auto exact = fit_platform(synthesize_samples(truth, kSides));
    CHECK(rel_err(exact.profile.a(), truth.a()) < 1e-9);
    CHECK(rel_err(exact.profile.b(), truth.b()) < 1e-9);

    // Noisy data: optimality and scale covariance.
    auto noisy = synthesize_samples(truth, kSides);
    for (auto& s : noisy) s.inference_time = std::max(1e-6, s.inference_time + noise(rng));
    const auto fit = fit_platform(noisy);
    if (!fit.clamped) {
      const double best = sse(noisy, fit.profile.a(), fit.profile.b());
      for (double da : {-1e-6, 1e-6}) {
        CHECK(sse(noisy, fit.profile.a() + da, fit.profile.b()) >= best);
      }
      for (double db : {-1e-6, 1e-6}) {
        CHECK(sse(noisy, fit.profile.a(), fit.profile.b() + db) >= best);
      }
    }
    const double lambda = scale(rng);
    auto scaled = noisy;
    for (auto& s : scaled) s.inference_time *= lambda;
    const auto fit_scaled = fit_platform(scaled);
    CHECK(fit_scaled.profile.a() == doctest::Approx(fit.profile.a() * lambda).epsilon(1e-9));
    CHECK(fit_scaled.profile.b() == doctest::Approx(fit.profile.b() * lambda).epsilon(1e-9));
    CHECK(fit_scaled.rmse == doctest::Approx(fit.rmse * lambda).epsilon(1e-9));
  }
}

TEST_CASE("select_resolution") {
  const std::vector<AccuracyPoint> pts{
      {100, 0.10}, {200, 0.25}, {300, 0.40}, {500, 0.55}, {800, 0.68}, {1000, 0.70}};
  CHECK(select_resolution(pts, 0.6) == 800u);
  CHECK(select_resolution(pts, 0.0) == 100u);
  CHECK_FALSE(select_resolution(pts, 1.01));
  // Raising the threshold never picks a smaller side.
  std::uint32_t last = 0;
  for (double t = 0.0; t <= 0.75; t += 0.01) {
    const auto side = select_resolution(pts, t);
    if (!side) break;
    CHECK(*side >= last);
    last = *side;
  }
}

TEST_CASE("shipped data files parse") {
  std::ifstream meas(std::string(EDGECAP_DATA_DIR) + "/inference_synthetic.csv");
  REQUIRE(meas);
  const auto samples = parse_measurements(meas);
  CHECK(samples.size() == 18);
  std::ifstream acc(std::string(EDGECAP_DATA_DIR) + "/accuracy_illustrative.csv");
  REQUIRE(acc);
  const auto points = parse_accuracy(acc);
  CHECK(points.size() == 6);
}
