#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "head/detectors.hpp"
#include "head/records.hpp"
#include "head/rng.hpp"

namespace head {

/// Parameters of a synthetic generation workload.
struct SyntheticSpec {
  std::size_t prompts = 100;
  std::size_t seeds_per_prompt = 5;
  int num_objects = 3;
  double p_complete = 0.3;
  std::vector<int> critical_timesteps = {25};
  bool with_relation = false;
  /// Recorded labels equal the ground truth unless a profile is given, in
  /// which case each label is an independent stochastic_detect draw.
  std::optional<DetectorProfile> label_profile;
};

/// Each record is complete with probability p_complete; otherwise between 1
/// and k objects (uniformly) are missing. Present objects get uniform
/// centroids. With `with_relation`, objects 0 and 1 share one relation of a
/// uniformly drawn kind. Record i of prompt j uses seed i.
std::vector<GenerationRecord> make_synthetic_records(const SyntheticSpec& spec,
                                                     const RngStream& rng);

}  // namespace head
