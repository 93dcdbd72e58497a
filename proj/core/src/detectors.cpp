#include "head/detectors.hpp"

#include <algorithm>

#include "head/errors.hpp"

namespace head {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

void require_signal(const CriticalSignals& signals) {
  if (signals.presence.size() != signals.objects.size()) {
    throw ConsistencyError("presence signal has " + std::to_string(signals.presence.size()) +
                           " entries for " + std::to_string(signals.objects.size()) +
                           " objects");
  }
}

}  // namespace

void DetectorProfile::validate() const {
  if (!is_probability(recall)) {
    throw ParameterError("detector recall must be in [0, 1], got " + std::to_string(recall));
  }
  if (!is_probability(tn_rate)) {
    throw ParameterError("detector TN-rate must be in [0, 1], got " + std::to_string(tn_rate));
  }
}

const std::vector<TimestepProfile>& published_profiles() {
  static const std::vector<TimestepProfile> rows = {
      {5, {0.9022, 0.5016, "HEaD 5"}, false},
      {8, {0.9106, 0.5693, "HEaD 8"}, false},
      {10, {0.9009, 0.5837, "HEaD 10"}, false},
      {12, {0.9115, 0.6336, "HEaD 12"}, false},
      {14, {0.9342, 0.6165, "HEaD 14"}, false},
      {16, {0.9360, 0.6442, "HEaD 16"}, false},
      {18, {0.9313, 0.6686, "HEaD 18"}, false},
      {20, {0.9481, 0.6543, "HEaD 20"}, false},
      {25, {0.9340, 0.7695, "HEaD 25"}, false},
      {8, {0.8567, 0.4373, "HEaD- 8"}, true},
      {25, {0.8802, 0.5216, "HEaD- 25"}, true},
  };
  return rows;
}

const TimestepProfile& published_profile(const std::string& label) {
  for (const auto& row : published_profiles()) {
    if (row.profile.label == label) return row;
  }
  throw ParameterError("no published detector profile named '" + label + "'");
}

AttentionMap::AttentionMap(std::size_t side, std::vector<double> values, ObjectRef object,
                           int timestep)
    : side_(side), values_(std::move(values)), object_(std::move(object)), timestep_(timestep) {
  if (side_ == 0) throw ParameterError("attention map side must be at least 1");
  if (values_.size() != side_ * side_) {
    throw DimensionError("attention map expects " + std::to_string(side_ * side_) +
                         " values, got " + std::to_string(values_.size()));
  }
  if (std::any_of(values_.begin(), values_.end(), [](double v) { return !(v >= 0.0); })) {
    throw ParameterError("attention activations must be non-negative");
  }
}

double AttentionMap::max_activation() const {
  return *std::max_element(values_.begin(), values_.end());
}

PresencePrediction stochastic_detect(const ObjectRef& object, bool truly_present,
                                     const DetectorProfile& profile, RngStream& rng) {
  // One draw per call regardless of the branch keeps streams aligned.
  const double u = rng.uniform();
  const bool present = truly_present ? u < profile.recall : !(u < profile.tn_rate);
  return {object, present};
}

PresencePrediction attention_energy_detect(const AttentionMap& map, double threshold) {
  if (!(threshold > 0.0)) throw ParameterError("attention threshold must be positive");
  return {map.object(), map.max_activation() > threshold};
}

std::vector<PresencePrediction> SignalDetector::predict(const CriticalSignals& signals,
                                                        RngStream&) const {
  require_signal(signals);
  std::vector<PresencePrediction> out;
  out.reserve(signals.objects.size());
  for (std::size_t i = 0; i < signals.objects.size(); ++i) {
    out.push_back({signals.objects[i], signals.presence[i]});
  }
  return out;
}

ProfileDetector::ProfileDetector(DetectorProfile profile) : profile_(std::move(profile)) {
  profile_.validate();
}

std::vector<PresencePrediction> ProfileDetector::predict(const CriticalSignals& signals,
                                                         RngStream& rng) const {
  require_signal(signals);
  std::vector<PresencePrediction> out;
  out.reserve(signals.objects.size());
  for (std::size_t i = 0; i < signals.objects.size(); ++i) {
    out.push_back(stochastic_detect(signals.objects[i], signals.presence[i], profile_, rng));
  }
  return out;
}

AttentionEnergyDetector::AttentionEnergyDetector(double threshold) : threshold_(threshold) {
  if (!(threshold > 0.0)) throw ParameterError("attention threshold must be positive");
}

std::vector<PresencePrediction> AttentionEnergyDetector::predict(const CriticalSignals& signals,
                                                                 RngStream&) const {
  if (signals.attention.size() != signals.objects.size()) {
    throw ConsistencyError("attention detector needs one map per object");
  }
  std::vector<PresencePrediction> out;
  out.reserve(signals.objects.size());
  for (std::size_t i = 0; i < signals.objects.size(); ++i) {
    out.push_back({signals.objects[i],
                   signals.attention[i].max_activation() > threshold_});
  }
  return out;
}

}  // namespace head
