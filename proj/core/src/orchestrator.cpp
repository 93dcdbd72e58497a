#include "head/orchestrator.hpp"

#include <algorithm>

#include "head/errors.hpp"

namespace head {

SeedSequence SeedSequence::from_list(std::vector<std::int64_t> seeds) {
  SeedSequence s;
  s.list_ = std::move(seeds);
  return s;
}

SeedSequence SeedSequence::generated(std::uint64_t master_seed) {
  SeedSequence s;
  s.generated_ = true;
  s.rng_ = RngStream(master_seed).substream("seeds");
  return s;
}

std::optional<std::int64_t> SeedSequence::next() {
  if (generated_) return static_cast<std::int64_t>(rng_.next_u64() >> 33);
  if (pos_ >= list_.size()) return std::nullopt;
  return list_[pos_++];
}

void SessionConfig::validate() const {
  if (max_restarts < 1) throw ParameterError("max_restarts must be at least 1");
  if (total_steps < 1) throw ParameterError("total_steps must be at least 1");
  if (critical_timestep < 0 || critical_timestep > total_steps) {
    throw ParameterError("critical timestep must lie in [0, total_steps]");
  }
  if (!(tolerance >= 0.0 && tolerance < 0.5)) {
    throw ParameterError("relation tolerance must lie in [0, 0.5)");
  }
}

std::string_view to_string(AttemptDisposition d) {
  switch (d) {
    case AttemptDisposition::accepted:
      return "accepted";
    case AttemptDisposition::aborted:
      return "aborted";
    case AttemptDisposition::fallback:
      return "fallback";
  }
  return "?";
}

std::string_view to_string(FallbackMode m) {
  return m == FallbackMode::resume ? "resume" : "scratch";
}

namespace {

std::size_t fallback_index(std::span<const AttemptOutcome> attempts) {
  if (attempts.empty()) throw ParameterError("no attempts to choose a fallback seed from");
  // max_element returns the first maximum
  auto best = std::max_element(attempts.begin(), attempts.end(),
                               [](const AttemptOutcome& a, const AttemptOutcome& b) {
                                 return a.predicted_present_count < b.predicted_present_count;
                               });
  return static_cast<std::size_t>(best - attempts.begin());
}

}  // namespace

std::int64_t select_fallback_seed(std::span<const AttemptOutcome> attempts) {
  return attempts[fallback_index(attempts)].seed;
}

SessionResult run_session(SessionConfig config, GenerationBackend& backend,
                          const PresenceDetector& detector,
                          std::span<const RelationSpec> relations, RngStream& detector_rng) {
  config.validate();
  const int ct = config.critical_timestep;
  const int total = config.total_steps;

  SessionResult result;
  result.fallback_mode =
      backend.supports_state_cache() ? FallbackMode::resume : FallbackMode::scratch;

  for (int i = 0; i < config.max_restarts; ++i) {
    auto seed = config.seeds.next();
    if (!seed) {
      throw ConfigurationError("seed sequence exhausted after " + std::to_string(i) +
                               " attempts (max_restarts " +
                               std::to_string(config.max_restarts) + ")");
    }
    const auto signals = backend.run_to_critical(*seed, ct);
    const auto predictions = detector.predict(signals, detector_rng);

    AttemptOutcome attempt;
    attempt.seed = *seed;
    attempt.decision = gate_joint(predictions, relations, signals.centroids, config.tolerance);
    attempt.predicted_present_count = static_cast<std::size_t>(
        std::count_if(predictions.begin(), predictions.end(),
                      [](const PresencePrediction& p) { return p.present; }));
    attempt.truly_complete = backend.truly_complete(*seed);

    if (attempt.decision.proceed) {
      attempt.disposition = AttemptDisposition::accepted;
      attempt.steps_consumed = total;
      attempt.final = true;
      result.chosen_seed = *seed;
      result.attempts.push_back(std::move(attempt));
      result.total_steps_consumed += total;
      return result;
    }
    attempt.disposition = AttemptDisposition::aborted;
    attempt.steps_consumed = ct;
    result.total_steps_consumed += ct;
    result.attempts.push_back(std::move(attempt));
  }

  result.fallback_used = true;
  auto& chosen = result.attempts[fallback_index(result.attempts)];
  result.chosen_seed = chosen.seed;
  const int extra = result.fallback_mode == FallbackMode::resume ? total - ct : total;
  chosen.disposition = AttemptDisposition::fallback;
  chosen.final = true;
  chosen.steps_consumed += extra;
  result.total_steps_consumed += extra;
  return result;
}

ReplayBackend::ReplayBackend(std::span<const GenerationRecord> records, bool cache_state)
    : records_(records), cache_state_(cache_state) {
  if (records_.empty()) throw ParameterError("replay needs at least one record");
}

const GenerationRecord& ReplayBackend::find(std::int64_t seed) const {
  auto it = std::find_if(records_.begin(), records_.end(),
                         [&](const GenerationRecord& r) { return r.seed == seed; });
  if (it == records_.end()) {
    throw DataError("no recorded generation for seed " + std::to_string(seed));
  }
  return *it;
}

CriticalSignals ReplayBackend::run_to_critical(std::int64_t seed, int critical_timestep) {
  const auto& rec = find(seed);
  auto labels = rec.per_ct_predictions.find(critical_timestep);
  if (labels == rec.per_ct_predictions.end()) {
    throw DataError("seed " + std::to_string(seed) + " of prompt '" + rec.prompt +
                        "' has no labels at critical timestep " +
                        std::to_string(critical_timestep),
                    -1, "per_ct_predictions");
  }
  CriticalSignals s;
  s.objects = rec.requested_objects;
  s.presence = labels->second;
  s.centroids = rec.centroids;
  return s;
}

std::optional<bool> ReplayBackend::truly_complete(std::int64_t seed) const {
  return find(seed).complete();
}

std::vector<std::int64_t> ReplayBackend::seeds() const {
  std::vector<std::int64_t> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.seed);
  return out;
}

SessionResult replay_from_manifest(SessionConfig config,
                                   std::span<const GenerationRecord> records,
                                   const std::optional<DetectorProfile>& profile,
                                   RngStream& detector_rng, bool use_relations,
                                   bool cache_state) {
  ReplayBackend backend(records, cache_state);
  for (const auto& r : records) {
    if (r.relations != records.front().relations) {
      throw DataError("records of prompt '" + r.prompt + "' disagree on relations", -1,
                      "relations");
    }
  }
  config.seeds = SeedSequence::from_list(backend.seeds());
  std::span<const RelationSpec> relations;
  if (use_relations) relations = records.front().relations;
  if (profile) {
    ProfileDetector detector(*profile);
    return run_session(std::move(config), backend, detector, relations, detector_rng);
  }
  SignalDetector detector;
  return run_session(std::move(config), backend, detector, relations, detector_rng);
}

int baseline_steps(std::span<const GenerationRecord> records, const SessionConfig& config) {
  config.validate();
  const std::size_t cap = std::min<std::size_t>(records.size(), config.max_restarts);
  std::size_t runs = cap;
  for (std::size_t i = 0; i < cap; ++i) {
    if (records[i].complete()) {
      runs = i + 1;
      break;
    }
  }
  return static_cast<int>(runs) * config.total_steps;
}

TraceConfusion trace_confusion(std::span<const SessionResult> sessions) {
  TraceConfusion c;
  for (const auto& s : sessions) {
    for (const auto& a : s.attempts) {
      if (!a.truly_complete) continue;
      const bool passed = a.decision.presence_ok;
      if (*a.truly_complete) {
        (passed ? c.tp : c.fn)++;
      } else {
        (passed ? c.fp : c.tn)++;
      }
    }
  }
  return c;
}

}  // namespace head
