#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "head/detectors.hpp"
#include "head/gating.hpp"
#include "head/records.hpp"
#include "head/rng.hpp"

namespace head {

/// Ordered source of initial-noise seeds: either an explicit finite list or an
/// endless reproducible stream drawn from a master seed.
class SeedSequence {
 public:
  static SeedSequence from_list(std::vector<std::int64_t> seeds);
  static SeedSequence generated(std::uint64_t master_seed);

  /// Next seed, or nullopt once an explicit list is exhausted.
  std::optional<std::int64_t> next();

 private:
  SeedSequence() : rng_(0) {}
  std::vector<std::int64_t> list_;
  std::size_t pos_ = 0;
  bool generated_ = false;
  RngStream rng_;
};

struct SessionConfig {
  int critical_timestep = 25;
  int total_steps = 50;
  int max_restarts = 5;
  double tolerance = kDefaultTolerance;
  SeedSequence seeds = SeedSequence::generated(0);

  void validate() const;
};

enum class AttemptDisposition {
  accepted,  ///< gate passed, ran to the last step
  aborted,   ///< gate failed, stopped at the critical timestep
  fallback,  ///< gate failed, later chosen as the best seed and finished
};

std::string_view to_string(AttemptDisposition d);

enum class FallbackMode {
  resume,   ///< continue from the cached critical-timestep state: T - CT more steps
  scratch,  ///< regenerate from step 0: T more steps
};

std::string_view to_string(FallbackMode m);

struct AttemptOutcome {
  std::int64_t seed = 0;
  GateDecision decision;
  int steps_consumed = 0;
  std::size_t predicted_present_count = 0;
  bool final = false;
  AttemptDisposition disposition = AttemptDisposition::aborted;
  std::optional<bool> truly_complete;  ///< when the backend knows the ground truth
};

struct SessionResult {
  std::vector<AttemptOutcome> attempts;
  std::int64_t chosen_seed = 0;
  int total_steps_consumed = 0;
  bool fallback_used = false;
  FallbackMode fallback_mode = FallbackMode::resume;
};

/// A generator that can be driven up to the critical timestep for a seed.
class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;

  /// Signals extracted at the critical timestep for this seed.
  virtual CriticalSignals run_to_critical(std::int64_t seed, int critical_timestep) = 0;

  /// Whether the state at the critical timestep can be resumed later.
  virtual bool supports_state_cache() const { return false; }

  /// Ground-truth completeness of the final image, if known (for tracing).
  virtual std::optional<bool> truly_complete(std::int64_t) const { return std::nullopt; }
};

/// Seed of the attempt with the most objects predicted present; the earliest
/// attempt wins ties. ParameterError on an empty list.
std::int64_t select_fallback_seed(std::span<const AttemptOutcome> attempts);

/// Restart loop: gate each seed once at the critical timestep, finish the
/// first seed that passes, abort the others. After `max_restarts` failed
/// gates the best-scoring seed is finished instead (resumed when the backend
/// caches state, regenerated otherwise). ConfigurationError if the seed
/// sequence runs out first.
SessionResult run_session(SessionConfig config, GenerationBackend& backend,
                          const PresenceDetector& detector,
                          std::span<const RelationSpec> relations, RngStream& detector_rng);

/// Backend that serves recorded generations of one prompt. Presence signals
/// are the labels recorded at the critical timestep; centroids come from the
/// record.
class ReplayBackend final : public GenerationBackend {
 public:
  explicit ReplayBackend(std::span<const GenerationRecord> records, bool cache_state = true);

  CriticalSignals run_to_critical(std::int64_t seed, int critical_timestep) override;
  bool supports_state_cache() const override { return cache_state_; }
  std::optional<bool> truly_complete(std::int64_t seed) const override;

  std::vector<std::int64_t> seeds() const;

 private:
  const GenerationRecord& find(std::int64_t seed) const;
  std::span<const GenerationRecord> records_;
  bool cache_state_;
};

/// Drives run_session over the recorded seeds of one prompt, in record order.
/// Recorded labels are used as-is, or perturbed by `profile` when given.
/// Relations are taken from the records, which must agree on them. Without
/// `cache_state` the fallback seed is regenerated from scratch.
SessionResult replay_from_manifest(SessionConfig config,
                                   std::span<const GenerationRecord> records,
                                   const std::optional<DetectorProfile>& profile,
                                   RngStream& detector_rng, bool use_relations = true,
                                   bool cache_state = true);

/// Steps an ungated generator spends: full runs until the first truly
/// complete seed, capped at max_restarts runs.
int baseline_steps(std::span<const GenerationRecord> records, const SessionConfig& config);

/// Image-level confusion of gate presence decisions against ground truth over
/// every traced attempt with known truth.
struct TraceConfusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

TraceConfusion trace_confusion(std::span<const SessionResult> sessions);

}  // namespace head
