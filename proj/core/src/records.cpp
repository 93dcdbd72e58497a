#include "head/records.hpp"

#include "head/errors.hpp"

namespace head {

bool GenerationRecord::complete() const {
  return present_objects.size() == requested_objects.size();
}

std::vector<PresencePrediction> GenerationRecord::predictions_at(int ct) const {
  auto it = per_ct_predictions.find(ct);
  if (it == per_ct_predictions.end()) {
    throw DataError("no presence labels recorded at critical timestep " + std::to_string(ct) +
                        " (prompt '" + prompt + "', seed " + std::to_string(seed) + ")",
                    -1, "per_ct_predictions");
  }
  std::vector<PresencePrediction> out;
  out.reserve(requested_objects.size());
  for (std::size_t i = 0; i < requested_objects.size(); ++i) {
    out.push_back({requested_objects[i], it->second[i]});
  }
  return out;
}

void GenerationRecord::validate(long index) const {
  if (requested_objects.empty()) {
    throw DataError("a record must request at least one object", index, "requested_objects");
  }
  for (std::size_t i = 0; i < requested_objects.size(); ++i) {
    if (requested_objects[i].index != i) {
      throw DataError("object index " + std::to_string(requested_objects[i].index) +
                          " does not match its position " + std::to_string(i),
                      index, "requested_objects");
    }
    if (requested_objects[i].name.empty()) {
      throw DataError("object " + std::to_string(i) + " has an empty name", index,
                      "requested_objects");
    }
  }
  const auto k = requested_objects.size();
  for (auto p : present_objects) {
    if (p >= k) {
      throw DataError("present object " + std::to_string(p) + " was not requested", index,
                      "present_objects");
    }
  }
  for (const auto& [obj, c] : centroids) {
    if (!is_present(obj)) {
      throw DataError("centroid given for object " + std::to_string(obj) +
                          " which is not present",
                      index, "centroids");
    }
  }
  for (const auto& [ct, labels] : per_ct_predictions) {
    if (ct < 0) throw DataError("negative critical timestep", index, "per_ct_predictions");
    if (labels.size() != k) {
      throw DataError("predictions at ct " + std::to_string(ct) + " have " +
                          std::to_string(labels.size()) + " entries for " + std::to_string(k) +
                          " objects",
                      index, "per_ct_predictions");
    }
  }
  for (const auto& r : relations) {
    if (r.subject >= k || r.object >= k) {
      throw DataError("relation references an object outside the prompt", index, "relations");
    }
    if (r.subject == r.object) {
      throw DataError("relation subject and object coincide", index, "relations");
    }
  }
  if (!relations.empty()) {
    for (auto p : present_objects) {
      if (!centroids.contains(p)) {
        throw DataError("present object " + std::to_string(p) + " ('" +
                            requested_objects[p].name + "') has no centroid",
                        index, "centroids");
      }
    }
  }
}

}  // namespace head
