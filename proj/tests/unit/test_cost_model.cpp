#include <doctest.h>

#include <cmath>

#include "head/cost_model.hpp"
#include "head/errors.hpp"
#include "oracles.hpp"

using namespace head;

namespace {

CostModelParams params(double p, double r, double tn, int k, int ct, int total = 50) {
  CostModelParams c;
  c.p_complete = p;
  c.profile = {r, tn, ""};
  c.num_objects = k;
  c.critical_timestep = ct;
  c.total_steps = total;
  return c;
}

}  // namespace

TEST_CASE("closed form against the enumeration oracle") {
  for (double p : {0.1, 0.3, 0.6, 1.0}) {
    for (double r : {0.7, 0.9, 1.0}) {
      for (double tn : {0.0, 0.4, 0.8, 1.0}) {
        for (int k : {1, 2, 4}) {
          for (int ct : {0, 5, 25, 50}) {
            const double want = oracle::saving_enumerated(p, r, tn, k, ct / 50.0);
            CHECK(expected_time_saved_closed_form(params(p, r, tn, k, ct)) ==
                  doctest::Approx(want).epsilon(1e-12));
          }
        }
      }
    }
  }
}

TEST_CASE("closed form anchors") {
  // perfect detector, one object, abort at half way: E = 1.5 vs 2.0
  CHECK(expected_time_saved_closed_form(params(0.5, 1.0, 1.0, 1, 25)) == 0.25);
  CHECK(expected_time_with_head(params(0.5, 1.0, 1.0, 1, 25)) == 1.5);
  CHECK(expected_time_baseline(params(0.5, 1.0, 1.0, 1, 25)) == 2.0);

  // never halts early -> identical to the baseline
  for (double p : {0.2, 0.5, 0.9}) {
    for (int k : {1, 3}) CHECK(expected_time_saved_closed_form(params(p, 1.0, 0.0, k, 10)) == 0.0);
  }

  // every seed complete, so false negatives only cost time
  CHECK(expected_time_saved_closed_form(params(1.0, 0.9, 0.5, 2, 25)) ==
        doctest::Approx(1.0 - 1.0 / 0.81).epsilon(1e-14));
  CHECK(expected_time_saved_closed_form(params(1.0, 0.9, 0.5, 2, 25)) < 0.0);

  // CT = 0 with a perfect detector: every bad run is free, saving = 1 - p
  CHECK(expected_time_saved_closed_form(params(0.3, 1.0, 1.0, 2, 0)) == doctest::Approx(0.7));
}

TEST_CASE("closed form divergence and validation") {
  CHECK_THROWS_AS(expected_time_saved_closed_form(params(0.5, 0.0, 0.5, 2, 25)), DivergenceError);
  CHECK_THROWS_AS(expected_time_saved_closed_form(params(0.0, 0.9, 0.5, 2, 25)), ParameterError);
  CHECK_THROWS_AS(expected_time_saved_closed_form(params(0.5, 0.9, 0.5, 0, 25)), ParameterError);
  CHECK_THROWS_AS(expected_time_saved_closed_form(params(0.5, 0.9, 0.5, 2, 51)), ParameterError);
  CHECK_THROWS_AS(simulate_time_saved(params(0.5, 0.9, 0.5, 2, 25), 0, RngStream(1)), ParameterError);
}

TEST_CASE("overhead is charged once per attempt") {
  auto c = params(0.5, 1.0, 1.0, 1, 25);
  c.check_overhead = 0.1;
  // two attempts expected, each 0.1 more
  CHECK(expected_time_with_head(c) == doctest::Approx(1.7));
  const auto mc = simulate_time_saved(c, 200000, RngStream(8));
  CHECK(std::abs(mc.time_saved_fraction - expected_time_saved_closed_form(c)) <= 4 * mc.std_error);
}

TEST_CASE("Monte Carlo: hand-checkable case") {
  const auto r = simulate_time_saved(params(0.5, 1.0, 1.0, 1, 25), 1'000'000, RngStream(123));
  CHECK(std::abs(r.time_saved_fraction - 0.25) <= 0.002);
  CHECK(r.mean_time_baseline == 2.0);
  CHECK(r.num_simulations == 1'000'000);
  CHECK(r.time_saved_fraction == doctest::Approx(1.0 - r.mean_time_with_head / r.mean_time_baseline));
}

TEST_CASE("Monte Carlo: a detector that never flags saves nothing") {
  for (int k : {1, 3}) {
    const auto r = simulate_time_saved(params(0.4, 1.0, 0.0, k, 10), 200000, RngStream(k));
    CHECK(std::abs(r.time_saved_fraction) <= 4 * r.std_error);
  }
}

TEST_CASE("Monte Carlo: the weak legacy detector loses time") {
  const auto& legacy = published_profile("HEaD- 25").profile;
  auto c = params(0.4, legacy.recall, legacy.tn_rate, 3, 25);
  const auto r = simulate_time_saved(c, 200000, RngStream(31));
  CHECK(r.time_saved_fraction < 0.0);
  CHECK(r.time_saved_fraction + 4 * r.std_error < 0.0);
  CHECK(expected_time_saved_closed_form(c) < 0.0);
}

TEST_CASE("Monte Carlo agrees with the closed form across a grid") {
  for (double p : {0.2, 0.5, 0.8}) {
    for (double r : {0.8, 1.0}) {
      for (double tn : {0.3, 0.9}) {
        auto c = params(p, r, tn, 2, 20);
        const auto mc = simulate_time_saved(c, 20000, RngStream(std::uint64_t(p * 100 + r * 10 + tn)));
        CHECK(std::abs(mc.time_saved_fraction - expected_time_saved_closed_form(c)) <= 4 * mc.std_error);
      }
    }
  }
}

TEST_CASE("Monte Carlo is deterministic and thread-count independent") {
  auto c = params(0.35, 0.92, 0.6, 3, 14);
  const auto a = simulate_time_saved(c, 50000, RngStream(99), 1);
  const auto b = simulate_time_saved(c, 50000, RngStream(99), 1);
  const auto t4 = simulate_time_saved(c, 50000, RngStream(99), 4);
  CHECK(a.time_saved_fraction == b.time_saved_fraction);
  CHECK(a.std_error == b.std_error);
  CHECK(a.time_saved_fraction == t4.time_saved_fraction);
  CHECK(a.std_error == t4.std_error);
  const auto other = simulate_time_saved(c, 50000, RngStream(100), 1);
  CHECK(a.time_saved_fraction != other.time_saved_fraction);
}

TEST_CASE("property: monotonicity and bounds") {
  for (double p : {0.2, 0.5, 0.8}) {
    for (double r : {0.8, 0.95, 1.0}) {
      for (int k : {1, 2, 4}) {
        // strictly decreasing in CT
        for (double tn : {0.3, 0.7}) {
          double previous = 2.0;
          for (int ct = 0; ct <= 50; ++ct) {
            const double s = expected_time_saved_closed_form(params(p, r, tn, k, ct));
            CHECK(s < previous);
            previous = s;
            // cannot beat aborting every bad run at CT
            CHECK(s <= (1.0 - p) * (1.0 - ct / 50.0) + 1e-12);
          }
        }
        // strictly increasing in tn when CT < T
        double previous = -1e9;
        for (double tn = 0.0; tn <= 1.0; tn += 0.05) {
          const double s = expected_time_saved_closed_form(params(p, r, tn, k, 20));
          CHECK(s > previous);
          previous = s;
        }
      }
    }
  }
}

TEST_CASE("sweep_critical_timestep") {
  SUBCASE("fixed profile: earlier CT saves more") {
    const std::vector<int> grid = {5, 25};
    const auto rows = sweep_critical_timestep(params(0.4, 0.93, 0.77, 3, 25), grid);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].saving_closed_form > rows[1].saving_closed_form);
  }
  SUBCASE("published per-CT profiles keep the same ordering") {
    std::vector<SweepPoint> points = {
        {5, published_profile("HEaD 5").profile},
        {25, published_profile("HEaD 25").profile},
    };
    const auto rows = sweep_critical_timestep(params(0.4, 1.0, 1.0, 3, 25), points);
    CHECK(rows[0].saving_closed_form > rows[1].saving_closed_form);
    CHECK(rows[1].saving_closed_form > 0.0);
  }
  SUBCASE("default recording grid has 18 timesteps") {
    CHECK(std::size(kCriticalTimestepGrid) == 18);
    const auto rows = sweep_critical_timestep(params(0.4, 0.93, 0.77, 3, 25), kCriticalTimestepGrid);
    CHECK(rows.size() == 18);
  }
  SUBCASE("Monte Carlo column") {
    const std::vector<int> grid = {5, 25};
    auto base = params(0.4, 0.93, 0.77, 3, 25);
    auto rows = sweep_critical_timestep(base, grid);
    attach_monte_carlo(rows, base, 20000, RngStream(4));
    for (const auto& row : rows) {
      REQUIRE(row.monte_carlo);
      CHECK(std::abs(row.monte_carlo->time_saved_fraction - row.saving_closed_form) <=
            4 * row.monte_carlo->std_error);
    }
  }
}

TEST_CASE("mixture over object counts") {
  auto base = params(0.5, 0.93, 0.77, 1, 25);
  const CompletionProfile completion = {{2, 0.6}, {4, 0.3}};
  SUBCASE("a single-k mixture equals the plain closed form") {
    auto c = base;
    c.num_objects = 4;
    c.p_complete = 0.3;
    CHECK(mixture_time_saved(base, completion, {{4, 1.0}}) ==
          doctest::Approx(expected_time_saved_closed_form(c)));
  }
  SUBCASE("weights combine expected times, not savings") {
    auto c2 = base, c4 = base;
    c2.num_objects = 2, c2.p_complete = 0.6;
    c4.num_objects = 4, c4.p_complete = 0.3;
    const double want = 1.0 - (expected_time_with_head(c2) + expected_time_with_head(c4)) /
                                  (expected_time_baseline(c2) + expected_time_baseline(c4));
    CHECK(mixture_time_saved(base, completion, {{2, 1.0}, {4, 1.0}}) == doctest::Approx(want));
  }
  CHECK_THROWS_AS(mixture_time_saved(base, completion, {{3, 1.0}}), ParameterError);
  CHECK(completion_profile_sd14().at(4) == doctest::Approx(0.2696));
  CHECK(completion_profile_sd2().at(4) == doctest::Approx(0.3061));
}
