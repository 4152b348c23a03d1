#include <algorithm>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "edgecap/calibration.hpp"
#include "edgecap/cli.hpp"
#include "edgecap/io.hpp"

using namespace edgecap;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  args.insert(args.begin(), "edgecap");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kData = EDGECAP_DATA_DIR;

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("edgecap_cli_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::vector<std::string> analyze_args(const std::string& users, const std::string& req) {
  return {"analyze", "--users", users, "--aps", "1", "--arch", "centralized",
          "--platform", "central-server", "--goodput-mbps", "450", "--requirement", req};
}

}  // namespace

TEST_CASE("analyze exit codes") {
  const auto ok = call(analyze_args("1", "hr"));
  CHECK(ok.code == cli::kSuccess);
  CHECK(ok.out.find("9.836 ms") != std::string::npos);

  CHECK(call(analyze_args("2", "hr")).code == cli::kUnsatisfied);
  CHECK(call(analyze_args("2", "MR")).code == cli::kSuccess);
  CHECK(call(analyze_args("0", "hr")).code == cli::kUsage);
  CHECK(call(analyze_args("1", "xr")).code == cli::kUsage);

  auto custom = analyze_args("2", "hr");
  custom.resize(custom.size() - 2);
  custom.insert(custom.end(), {"--latency-ms", "19.672992"});
  CHECK(call(custom).code == cli::kSuccess);  // budget met with equality
  custom.back() = "19.67";
  CHECK(call(custom).code == cli::kUnsatisfied);

  auto unknown = analyze_args("1", "hr");
  unknown[8] = "tpu-v9";
  const auto bad = call(unknown);
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("tpu-v9") != std::string::npos);

  CHECK(call({"analyze", "--users", "1"}).code == cli::kUsage);
  CHECK(call({}).code == cli::kUsage);
  CHECK(call({"launch"}).code == cli::kUsage);
}

TEST_CASE("analyze JSON") {
  auto args = analyze_args("2", "mr");
  args.push_back("--json");
  const auto r = call(args);
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("\"l_total_ms\": 19.672992") != std::string::npos);
  CHECK(r.out.find("\"n_max\": 15") != std::string::npos);
  CHECK(r.out.find("\"satisfied\": true") != std::string::npos);
}

TEST_CASE("fit feeds analyze through a profile file") {
  Scratch s;
  const auto fit = call({"fit", "--input", kData + "/inference_synthetic.csv", "--only",
                         "coral-dev", "--out", s / "coral.json", "--accuracy",
                         kData + "/accuracy_illustrative.csv", "--threshold", "0.5"});
  REQUIRE(fit.code == cli::kSuccess);
  CHECK(fit.out.find("500p") != std::string::npos);
  const auto profile = io::profile_from_json(io::read_file(s / "coral.json"));
  const auto truth = *find_preset("coral-dev");
  CHECK(profile.a() == doctest::Approx(truth.a()).epsilon(1e-9));
  CHECK(profile.b() == doctest::Approx(truth.b()).epsilon(1e-9));

  // 14 users on one distributed AP at 1 Gbps: 40.32 + 14 * 21.70792 ms.
  const auto r = call({"analyze", "--users", "1400", "--aps", "105", "--arch", "distributed",
                       "--platform-file", s / "coral.json", "--goodput-mbps", "1000",
                       "--requirement", "lr", "--json"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("\"n_per_ap\": 14") != std::string::npos);

  CHECK(call({"analyze", "--users", "1", "--aps", "1", "--arch", "centralized", "--platform",
              "coral-dev", "--platform-file", s / "coral.json", "--goodput-mbps", "450",
              "--requirement", "lr"})
            .code == cli::kUsage);
}

TEST_CASE("fit failures") {
  Scratch s;
  // The shipped table mixes three platforms.
  CHECK(call({"fit", "--input", kData + "/inference_synthetic.csv", "--out", s / "x.json"})
            .code == cli::kFailure);
  CHECK(call({"fit", "--input", s / "absent.csv", "--out", s / "x.json"}).code == cli::kFailure);
  CHECK_FALSE(fs::exists(s / "x.json"));
}

TEST_CASE("simulate is deterministic and writes JSON") {
  Scratch s;
  const std::vector<std::string> args{"simulate", "--aps", "2", "--users-per-ap", "3",
                                      "--arch", "distributed", "--platform", "jetson-nano",
                                      "--goodput-mbps", "450", "--duration-s", "5",
                                      "--stagger-ms", "0.4", "--out"};
  auto a = args;
  a.push_back(s / "a.json");
  auto b = args;
  b.push_back(s / "b.json");
  REQUIRE(call(a).code == cli::kSuccess);
  REQUIRE(call(b).code == cli::kSuccess);
  CHECK(io::read_file(s / "a.json") == io::read_file(s / "b.json"));
  const auto result = io::sim_result_from_json(io::read_file(s / "a.json"));
  CHECK(result.frames_completed > 0);

  const auto to_stdout = call({"simulate", "--users-per-ap", "1", "--platform", "central-server",
                               "--goodput-mbps", "450", "--duration-s", "2"});
  CHECK(to_stdout.code == cli::kSuccess);
  CHECK(io::sim_result_from_json(to_stdout.out).mean_latency ==
        doctest::Approx(9.836496e-3).epsilon(1e-9));

  CHECK(call({"simulate", "--users-per-ap", "1", "--platform", "central-server", "--goodput-mbps",
              "450", "--mode", "turbo"})
            .code == cli::kUsage);
}

TEST_CASE("sweep writes one row per grid point, identically across runs") {
  Scratch s;
  const std::vector<std::string> base{"sweep", "--users", "2,100,1400", "--aps", "1,10,105"};
  auto one = base;
  one.insert(one.end(), {"--out", s / "one.csv", "--threads", "1"});
  auto many = base;
  many.insert(many.end(), {"--out", s / "many.csv", "--threads", "8"});
  REQUIRE(call(one).code == cli::kSuccess);
  REQUIRE(call(many).code == cli::kSuccess);
  const auto text = io::read_file(s / "one.csv");
  CHECK(text == io::read_file(s / "many.csv"));
  // 3 users x 3 APs x 3 platforms x 2 architectures x 2 goodputs, plus the header.
  CHECK(std::count(text.begin(), text.end(), '\n') == 3 * 3 * 3 * 2 * 2 + 1);

  auto json = base;
  json.insert(json.end(), {"--out", s / "grid.json"});
  REQUIRE(call(json).code == cli::kSuccess);
  std::istringstream csv(text);
  CHECK(io::sweep_from_json(io::read_file(s / "grid.json")) == io::parse_sweep_csv(csv));

  auto spot = base;
  spot.insert(spot.end(), {"--out", s / "spot.csv", "--spot", "2:1", "--spot-duration-s", "5",
                           "--spot-out", s / "spot.json"});
  const auto r = call(spot);
  CHECK(r.code == cli::kSuccess);
  CHECK(fs::exists(s / "spot.json"));

  auto off_grid = base;
  off_grid.insert(off_grid.end(), {"--out", s / "x.csv", "--spot", "3:1"});
  CHECK(call(off_grid).code == cli::kUsage);
  auto bad_arch = base;
  bad_arch.insert(bad_arch.end(), {"--out", s / "x.csv", "--arch", "mesh"});
  CHECK(call(bad_arch).code == cli::kUsage);
}

TEST_CASE("sweep reports unwritable output") {
  Scratch s;
  CHECK(call({"sweep", "--users", "2", "--aps", "1", "--out", s / "no/such/dir.csv"}).code ==
        cli::kFailure);
}

TEST_CASE("validate passes on a short horizon") {
  Scratch s;
  const auto r = call({"validate", "--max-users", "3", "--platform", "coral-dev", "--duration-s",
                       "20", "--out", s / "v.json"});
  CHECK(r.code == cli::kSuccess);
  CHECK(r.out.find("validation passed") != std::string::npos);
  const auto entries = io::validation_from_json(io::read_file(s / "v.json"));
  CHECK(entries.size() == 9);
  for (const auto& e : entries) CHECK(e.comparison.pass);
}
