#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "head/gating.hpp"

namespace head {

/// One (prompt, seed) generation outcome with its ground-truth labels and the
/// per-object presence predictions recorded at each critical timestep.
struct GenerationRecord {
  std::string prompt;
  std::int64_t seed = 0;
  std::vector<ObjectRef> requested_objects;
  std::set<std::size_t> present_objects;          ///< ground truth in the final image
  CentroidMap centroids;                          ///< present objects only
  std::map<int, std::vector<bool>> per_ct_predictions;  ///< aligned with requested_objects
  std::vector<RelationSpec> relations;
  std::string generator_id;

  bool complete() const;
  std::size_t present_count() const { return present_objects.size(); }
  bool is_present(std::size_t index) const { return present_objects.contains(index); }

  /// Recorded predictions at `ct`; DataError if the record has none there.
  std::vector<PresencePrediction> predictions_at(int ct) const;

  /// Checks every record invariant; DataError names the offending field.
  /// `index` is the record position used in error messages.
  void validate(long index = -1) const;

  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

}  // namespace head
