#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "head/gating.hpp"
#include "head/rng.hpp"

namespace head {

/// Stochastic characterization of a presence detector.
struct DetectorProfile {
  double recall = 1.0;   ///< P(predict present | truly present)
  double tn_rate = 1.0;  ///< P(predict absent | truly absent)
  std::string label;

  /// Throws ParameterError unless both rates are in [0, 1].
  void validate() const;
};

/// A published detector operating point at a given critical timestep.
struct TimestepProfile {
  int critical_timestep = 0;
  DetectorProfile profile;
  bool legacy = false;  ///< the earlier, weaker detector generation
};

/// Measured TN-rate/recall per critical timestep for the current detector
/// (nine rows) followed by the two rows of its predecessor.
const std::vector<TimestepProfile>& published_profiles();

/// Looks up a published profile by label, e.g. "HEaD 25". Throws
/// ParameterError if absent.
const TimestepProfile& published_profile(const std::string& label);

/// Square grid of non-negative cross-attention activations for one object.
class AttentionMap {
 public:
  AttentionMap(std::size_t side, std::vector<double> values, ObjectRef object, int timestep);

  std::size_t side() const noexcept { return side_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const ObjectRef& object() const noexcept { return object_; }
  int timestep() const noexcept { return timestep_; }
  double max_activation() const;

 private:
  std::size_t side_;
  std::vector<double> values_;
  ObjectRef object_;
  int timestep_;
};

/// One independent Bernoulli draw: a present object is reported present with
/// probability `recall`, an absent one is reported absent with `tn_rate`.
PresencePrediction stochastic_detect(const ObjectRef& object, bool truly_present,
                                     const DetectorProfile& profile, RngStream& rng);

/// Present iff the map's peak activation strictly exceeds `threshold` (> 0).
PresencePrediction attention_energy_detect(const AttentionMap& map, double threshold);

/// Everything a generation backend exposes at the critical timestep.
struct CriticalSignals {
  std::vector<ObjectRef> objects;
  /// Per-object presence signal (ground truth or a recorded label), aligned
  /// with `objects`. May be empty for backends that only expose attention.
  std::vector<bool> presence;
  /// Centroids available at the critical timestep, keyed by object index.
  CentroidMap centroids;
  /// One map per object, aligned with `objects`, when the backend has them.
  std::vector<AttentionMap> attention;
};

/// Pluggable per-object presence predictor.
class PresenceDetector {
 public:
  virtual ~PresenceDetector() = default;
  virtual std::vector<PresencePrediction> predict(const CriticalSignals& signals,
                                                  RngStream& rng) const = 0;
};

/// Passes the presence signal through unchanged.
class SignalDetector final : public PresenceDetector {
 public:
  std::vector<PresencePrediction> predict(const CriticalSignals& signals,
                                          RngStream& rng) const override;
};

/// Perturbs the presence signal with a DetectorProfile.
class ProfileDetector final : public PresenceDetector {
 public:
  explicit ProfileDetector(DetectorProfile profile);
  std::vector<PresencePrediction> predict(const CriticalSignals& signals,
                                          RngStream& rng) const override;
  const DetectorProfile& profile() const noexcept { return profile_; }

 private:
  DetectorProfile profile_;
};

/// Thresholds the peak of each object's attention map.
class AttentionEnergyDetector final : public PresenceDetector {
 public:
  explicit AttentionEnergyDetector(double threshold);
  std::vector<PresencePrediction> predict(const CriticalSignals& signals,
                                          RngStream& rng) const override;

 private:
  double threshold_;
};

}  // namespace head
