#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "edgecap/calibration.hpp"
#include "edgecap/sweep.hpp"

using namespace edgecap;
using namespace edgecap::sweep;

namespace {

const AchievabilityCell& cell_at(const std::vector<AchievabilityCell>& cells, std::uint64_t users,
                                 std::uint64_t aps, Architecture arch, const std::string& platform,
                                 double goodput) {
  const auto it = std::find_if(cells.begin(), cells.end(), [&](const AchievabilityCell& c) {
    return c.users == users && c.aps == aps && c.architecture == arch && c.platform == platform &&
           c.goodput == goodput;
  });
  REQUIRE(it != cells.end());
  return *it;
}

std::size_t rank(const AchievabilityCell& c, const SweepGrid& g) {
  return requirement_rank(c.best, g.requirements);
}

}  // namespace

TEST_CASE("default grid") {
  const auto g = SweepGrid::defaults();
  CHECK_NOTHROW(g.validate());
  CHECK(g.user_counts == std::vector<std::uint64_t>{2, 10, 25, 50, 100, 200, 400, 700, 1000, 1400});
  CHECK(g.ap_counts == std::vector<std::uint64_t>{1, 3, 5, 10, 21, 35, 53, 70, 88, 105});
  CHECK(g.platforms.size() == 3);
  CHECK(g.channels.size() == 2);
  CHECK(g.architectures.size() == 2);
  CHECK(g.platform("coral-dev").a() == 20.98e-3);
  CHECK_THROWS_AS(g.platform("nope"), std::invalid_argument);

  auto bad = g;
  bad.user_counts.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = g;
  bad.ap_counts.push_back(0);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = g;
  std::swap(bad.requirements[0], bad.requirements[2]);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("worked grid points") {
  const auto g = SweepGrid::defaults();
  const auto cells = run_sweep(g);

  // 12.8 ms upload + 2 * 3.436496 ms inference = 19.672992 ms: MR.
  const auto& small = cell_at(cells, 2, 1, Architecture::centralized, "central-server", 450e6);
  CHECK(small.n_per_ap == 2);
  CHECK(small.breakdown.total == doctest::Approx(19.672992e-3).epsilon(1e-12));
  CHECK(small.best == "MR");

  // ceil(1400 / 105) = 14 per AP: 40.32 ms + 14 * 21.70792 ms = 344.23088 ms: LR.
  const auto& coral = cell_at(cells, 1400, 105, Architecture::distributed, "coral-dev", 1e9);
  CHECK(coral.n_per_ap == 14);
  CHECK(coral.breakdown.total == doctest::Approx(344.23088e-3).epsilon(1e-12));
  CHECK(coral.best == "LR");

  // One server queue for 1400 users: 4.81 s of inference alone.
  const auto& central = cell_at(cells, 1400, 105, Architecture::centralized, "central-server", 1e9);
  CHECK(central.breakdown.processing == doctest::Approx(1400 * 3.436496e-3).epsilon(1e-12));
  CHECK_FALSE(central.best);
}

TEST_CASE("row-major order and size") {
  const auto g = SweepGrid::defaults();
  const auto cells = run_sweep(g, 3);
  REQUIRE(cells.size() == 2 * 2 * 3 * 10 * 10);
  std::size_t i = 0;
  for (const auto& ch : g.channels)
    for (auto arch : g.architectures)
      for (const auto& p : g.platforms)
        for (auto u : g.user_counts)
          for (auto a : g.ap_counts) {
            const auto& c = cells[i++];
            CHECK(c.goodput == ch.goodput());
            CHECK(c.architecture == arch);
            CHECK(c.platform == p.name());
            CHECK(c.users == u);
            CHECK(c.aps == a);
          }
}

TEST_CASE("thread count does not change the output") {
  const auto g = SweepGrid::defaults();
  const auto one = run_sweep(g, 1);
  for (unsigned t : {2u, 5u, 16u, 0u}) {
    CAPTURE(t);
    CHECK(run_sweep(g, t) == one);
  }
}

TEST_CASE("every cell agrees with a direct model evaluation") {
  const auto g = SweepGrid::defaults();
  for (const auto& c : run_sweep(g)) {
    const auto s = scenario_for(c, g);
    CHECK(system_latency(s) == c.breakdown);
    CHECK(s.n_per_ap() == c.n_per_ap);
    const auto best = best_requirement(s, g.requirements);
    CHECK(c.best == (best ? std::optional<std::string>(best->name()) : std::nullopt));
  }
}

TEST_CASE("achievability is monotone") {
  const auto g = SweepGrid::defaults();
  const auto cells = run_sweep(g);
  for (const auto& c : cells) {
    const auto r = rank(c, g);
    // More APs never hurt; more users never help.
    for (const auto& o : cells) {
      if (o.architecture != c.architecture || o.platform != c.platform) continue;
      if (o.goodput == c.goodput && o.users == c.users && o.aps > c.aps) CHECK(rank(o, g) <= r);
      if (o.goodput == c.goodput && o.aps == c.aps && o.users > c.users) CHECK(rank(o, g) >= r);
      if (o.users == c.users && o.aps == c.aps && o.goodput > c.goodput) CHECK(rank(o, g) <= r);
    }
    // Distributed processing is never worse than one central unit.
    if (c.architecture == Architecture::centralized) {
      CHECK(rank(cell_at(cells, c.users, c.aps, Architecture::distributed, c.platform, c.goodput),
                 g) <= r);
    }
  }
}

TEST_CASE("requirement_rank") {
  const auto reqs = standard_requirements();
  CHECK(requirement_rank(std::string("HR"), reqs) == 0);
  CHECK(requirement_rank(std::string("LR"), reqs) == 2);
  CHECK(requirement_rank(std::nullopt, reqs) == 3);
}

TEST_CASE("spot validation") {
  auto g = SweepGrid::defaults();
  g.user_counts = {2, 10, 1400};
  g.ap_counts = {1, 10, 105};
  const auto cells = run_sweep(g);
  SpotSettings settings;
  settings.duration = 10.0;

  CHECK(spot_validate({}, g, settings).empty());

  std::vector<AchievabilityCell> pick{
      cell_at(cells, 2, 1, Architecture::centralized, "central-server", 450e6),
      cell_at(cells, 1400, 105, Architecture::distributed, "coral-dev", 1e9),
      cell_at(cells, 1400, 105, Architecture::centralized, "central-server", 1e9),
      cell_at(cells, 1400, 1, Architecture::distributed, "jetson-nano", 450e6),
      cell_at(cells, 10, 10, Architecture::distributed, "jetson-nano", 450e6),
  };
  const auto checks = spot_validate(pick, g, settings);
  REQUIRE(checks.size() == pick.size());
  for (std::size_t i = 0; i < checks.size(); ++i) {
    CAPTURE(i);
    CHECK(checks[i].cell == pick[i]);
    CHECK(checks[i].consistent);
  }
  CHECK(checks[0].mode == desim::SimMode::combined);
  CHECK(checks[0].budget == 0.1);
  CHECK(checks[0].simulated_mean <= checks[0].analytical);
  // Centralized with 1400 users: the server alone blows the budget.
  CHECK(checks[2].mode == desim::SimMode::compute_only);
  CHECK(checks[2].budget == 0.5);
  CHECK(checks[2].simulated_mean > 0.5);
}
