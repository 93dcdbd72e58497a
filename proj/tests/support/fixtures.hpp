#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "head/records.hpp"

namespace fixture {

/// Record with `k` requested objects named o0..o{k-1}, of which `present` are
/// present in the final image. Recorded labels at `ct` equal the truth.
inline head::GenerationRecord record(std::string prompt, std::int64_t seed, int k,
                                     std::initializer_list<std::size_t> present, int ct = 25) {
  head::GenerationRecord r;
  r.prompt = std::move(prompt);
  r.seed = seed;
  r.generator_id = "test";
  for (int i = 0; i < k; ++i) r.requested_objects.push_back({std::size_t(i), "o" + std::to_string(i)});
  r.present_objects.insert(present.begin(), present.end());
  std::vector<bool> labels(k);
  for (int i = 0; i < k; ++i) labels[i] = r.is_present(std::size_t(i));
  r.per_ct_predictions[ct] = labels;
  return r;
}

/// Record whose first `present_count` of `k` objects are present.
inline head::GenerationRecord with_count(std::string prompt, std::int64_t seed, int k, int present_count,
                                         int ct = 25) {
  auto r = record(std::move(prompt), seed, k, {}, ct);
  for (int i = 0; i < present_count; ++i) r.present_objects.insert(std::size_t(i));
  for (int i = 0; i < k; ++i) r.per_ct_predictions[ct][i] = i < present_count;
  return r;
}

}  // namespace fixture
