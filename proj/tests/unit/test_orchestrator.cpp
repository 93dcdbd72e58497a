#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "head/errors.hpp"
#include "head/orchestrator.hpp"

using namespace head;

namespace {

/// Backend whose critical-timestep signals are fixed per seed.
class ScriptedBackend final : public GenerationBackend {
 public:
  ScriptedBackend(int k, std::map<std::int64_t, std::vector<bool>> presence, bool cache = true)
      : k_(k), presence_(std::move(presence)), cache_(cache) {}

  CriticalSignals run_to_critical(std::int64_t seed, int) override {
    ++calls;
    CriticalSignals s;
    for (int i = 0; i < k_; ++i) s.objects.push_back({std::size_t(i), "o" + std::to_string(i)});
    s.presence = presence_.at(seed);
    return s;
  }
  bool supports_state_cache() const override { return cache_; }

  int calls = 0;

 private:
  int k_;
  std::map<std::int64_t, std::vector<bool>> presence_;
  bool cache_;
};

SessionConfig config(std::vector<std::int64_t> seeds, int ct = 25, int max_restarts = 5) {
  SessionConfig c;
  c.critical_timestep = ct;
  c.total_steps = 50;
  c.max_restarts = max_restarts;
  c.seeds = SeedSequence::from_list(std::move(seeds));
  return c;
}

std::vector<bool> count_of(int k, int present) {
  std::vector<bool> v(k);
  for (int i = 0; i < present; ++i) v[i] = true;
  return v;
}

}  // namespace

TEST_CASE("two aborts then an accept") {
  ScriptedBackend backend(3, {{1, {true, false, true}}, {2, {false, false, true}}, {3, {true, true, true}}});
  RngStream rng(0);
  const auto r = run_session(config({1, 2, 3}), backend, SignalDetector(), {}, rng);
  REQUIRE(r.attempts.size() == 3);
  CHECK(r.total_steps_consumed == 100);
  CHECK(r.chosen_seed == 3);
  CHECK_FALSE(r.fallback_used);
  CHECK(r.attempts[0].disposition == AttemptDisposition::aborted);
  CHECK(r.attempts[0].steps_consumed == 25);
  CHECK(r.attempts[2].disposition == AttemptDisposition::accepted);
  CHECK(r.attempts[2].steps_consumed == 50);
  CHECK(r.attempts[2].final);
  CHECK_FALSE(r.attempts[0].final);
}

TEST_CASE("the first seed passing costs one full run") {
  ScriptedBackend backend(2, {{9, {true, true}}, {10, {true, true}}});
  RngStream rng(0);
  const auto r = run_session(config({9, 10}), backend, SignalDetector(), {}, rng);
  CHECK(r.total_steps_consumed == 50);
  CHECK(r.attempts.size() == 1);
  CHECK(backend.calls == 1);
}

TEST_CASE("fallback after max_restarts failed gates") {
  const std::vector<int> counts = {2, 3, 1, 3, 2};
  std::map<std::int64_t, std::vector<bool>> presence;
  std::vector<std::int64_t> seeds;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    presence[100 + std::int64_t(i)] = count_of(4, counts[i]);
    seeds.push_back(100 + std::int64_t(i));
  }
  seeds.push_back(999);  // never reached
  presence[999] = count_of(4, 4);
  RngStream rng(0);

  SUBCASE("resume from the cached state") {
    ScriptedBackend backend(4, presence, true);
    const auto r = run_session(config(seeds, 10), backend, SignalDetector(), {}, rng);
    CHECK(r.fallback_used);
    CHECK(r.fallback_mode == FallbackMode::resume);
    CHECK(r.chosen_seed == 101);  // earliest of the tied best
    CHECK(r.total_steps_consumed == 5 * 10 + (50 - 10));
    CHECK(r.attempts.size() == 5);
    CHECK(r.attempts[1].disposition == AttemptDisposition::fallback);
    CHECK(r.attempts[1].final);
    CHECK(r.attempts[1].steps_consumed == 50);
    CHECK(r.attempts[3].disposition == AttemptDisposition::aborted);
    CHECK(backend.calls == 5);
  }
  SUBCASE("regenerate without a state cache") {
    ScriptedBackend backend(4, presence, false);
    const auto r = run_session(config(seeds, 10), backend, SignalDetector(), {}, rng);
    CHECK(r.fallback_mode == FallbackMode::scratch);
    CHECK(r.total_steps_consumed == 5 * 10 + 50);
  }
}

TEST_CASE("max_restarts bounds the number of gates") {
  std::map<std::int64_t, std::vector<bool>> presence;
  std::vector<std::int64_t> seeds;
  for (int i = 0; i < 20; ++i) {
    presence[i] = {false, true};
    seeds.push_back(i);
  }
  for (int m : {1, 2, 7}) {
    ScriptedBackend backend(2, presence);
    RngStream rng(0);
    const auto r = run_session(config(seeds, 20, m), backend, SignalDetector(), {}, rng);
    CHECK(r.attempts.size() == std::size_t(m));
    CHECK(r.chosen_seed == 0);
    CHECK(r.total_steps_consumed == m * 20 + 30);
  }
}

TEST_CASE("running out of seeds is a configuration error") {
  ScriptedBackend backend(1, {{1, {false}}, {2, {false}}});
  RngStream rng(0);
  CHECK_THROWS_AS(run_session(config({1, 2}), backend, SignalDetector(), {}, rng), ConfigurationError);
}

TEST_CASE("select_fallback_seed") {
  auto attempt = [](std::int64_t seed, std::size_t n) {
    AttemptOutcome a;
    a.seed = seed;
    a.predicted_present_count = n;
    return a;
  };
  const std::vector<AttemptOutcome> a = {attempt(1, 2), attempt(2, 3), attempt(3, 1)};
  CHECK(select_fallback_seed(a) == 2);
  const std::vector<AttemptOutcome> tie = {attempt(7, 3), attempt(8, 3)};
  CHECK(select_fallback_seed(tie) == 7);
  const std::vector<AttemptOutcome> one = {attempt(5, 0)};
  CHECK(select_fallback_seed(one) == 5);
  CHECK_THROWS_AS(select_fallback_seed({}), ParameterError);
}

TEST_CASE("session config validation") {
  auto c = config({1});
  c.critical_timestep = 51;
  CHECK_THROWS_AS(c.validate(), ParameterError);
  c = config({1});
  c.max_restarts = 0;
  CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("generated seeds are reproducible") {
  auto a = SeedSequence::generated(7), b = SeedSequence::generated(7), c = SeedSequence::generated(8);
  bool differs = false;
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next(), y = b.next(), z = c.next();
    REQUIRE(x);
    CHECK(*x == *y);
    CHECK(*x >= 0);
    differs = differs || *x != *z;
  }
  CHECK(differs);
}

TEST_CASE("replay from recorded generations") {
  const std::vector<GenerationRecord> recs = {
      fixture::with_count("p", 0, 3, 1), fixture::with_count("p", 1, 3, 2), fixture::with_count("p", 2, 3, 3)};
  RngStream rng(1);

  SUBCASE("recorded labels drive the same trace as a scripted backend") {
    const auto r = replay_from_manifest(config({0, 1, 2}), recs, std::nullopt, rng);
    CHECK(r.total_steps_consumed == 100);
    CHECK(r.chosen_seed == 2);
    REQUIRE(r.attempts.size() == 3);
    CHECK(r.attempts[0].truly_complete == false);
    CHECK(r.attempts[2].truly_complete == true);
    CHECK(baseline_steps(recs, config({0, 1, 2})) == 150);
  }
  SUBCASE("a detector that never flags accepts the first seed") {
    const auto r = replay_from_manifest(config({0, 1, 2}), recs, DetectorProfile{1.0, 0.0, ""}, rng);
    CHECK(r.attempts.size() == 1);
    CHECK(r.chosen_seed == 0);
    CHECK(r.total_steps_consumed == 50);
    const SessionResult sessions[] = {r};
    const auto t = trace_confusion(sessions);
    CHECK(t.fp == 1);
    CHECK(t.tp + t.tn + t.fn == 0);
  }
  SUBCASE("missing labels at the critical timestep") {
    CHECK_THROWS_AS(replay_from_manifest(config({0, 1, 2}, 10), recs, std::nullopt, rng), DataError);
  }
  SUBCASE("deterministic under a fixed detector seed") {
    RngStream a(5), b(5);
    const DetectorProfile noisy{0.8, 0.6, ""};
    const auto x = replay_from_manifest(config({0, 1, 2}, 25, 3), recs, noisy, a);
    const auto y = replay_from_manifest(config({0, 1, 2}, 25, 3), recs, noisy, b);
    CHECK(x.total_steps_consumed == y.total_steps_consumed);
    CHECK(x.chosen_seed == y.chosen_seed);
    CHECK(x.attempts.size() == y.attempts.size());
  }
}

TEST_CASE("a violated relation aborts an otherwise complete attempt") {
  auto bad = fixture::record("p", 0, 2, {0, 1});
  bad.centroids = {{0, Centroid(0.8, 0.5)}, {1, Centroid(0.2, 0.5)}};
  bad.relations = {{0, 1, RelationKind::left}};
  auto good = fixture::record("p", 1, 2, {0, 1});
  good.centroids = {{0, Centroid(0.2, 0.5)}, {1, Centroid(0.8, 0.5)}};
  good.relations = bad.relations;
  const std::vector<GenerationRecord> recs = {bad, good};
  RngStream rng(0);

  const auto r = replay_from_manifest(config({0, 1}), recs, std::nullopt, rng);
  REQUIRE(r.attempts.size() == 2);
  CHECK(r.attempts[0].decision.presence_ok);
  CHECK_FALSE(r.attempts[0].decision.relations_ok);
  CHECK(r.chosen_seed == 1);
  CHECK(r.total_steps_consumed == 75);

  const auto presence_only = replay_from_manifest(config({0, 1}), recs, std::nullopt, rng, false);
  CHECK(presence_only.chosen_seed == 0);
  CHECK(presence_only.total_steps_consumed == 50);
}

TEST_CASE("trace confusion counts every traced attempt") {
  const std::vector<GenerationRecord> recs = {
      fixture::with_count("p", 0, 2, 1), fixture::with_count("p", 1, 2, 2)};
  RngStream rng(0);
  const SessionResult sessions[] = {replay_from_manifest(config({0, 1}), recs, std::nullopt, rng)};
  const auto t = trace_confusion(sessions);
  CHECK(t.tn == 1);
  CHECK(t.tp == 1);
  CHECK(t.fp + t.fn == 0);
}
