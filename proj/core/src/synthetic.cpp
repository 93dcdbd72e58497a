#include "head/synthetic.hpp"

#include <algorithm>
#include <numeric>

#include "head/errors.hpp"

namespace head {

namespace {

const char* const kNames[] = {"dog", "car", "bench", "pizza", "airplane", "cat",
                              "umbrella", "horse", "clock", "bottle"};

std::size_t draw_index(RngStream& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(rng.uniform() * double(n)));
}

}  // namespace

std::vector<GenerationRecord> make_synthetic_records(const SyntheticSpec& spec,
                                                     const RngStream& rng) {
  if (spec.num_objects < 1) throw ParameterError("synthetic records need at least one object");
  if (!(spec.p_complete >= 0.0 && spec.p_complete <= 1.0)) {
    throw ParameterError("p_complete must be in [0, 1]");
  }
  if (spec.with_relation && spec.num_objects < 2) {
    throw ParameterError("a relation needs at least two objects");
  }
  if (spec.label_profile) spec.label_profile->validate();

  const auto k = static_cast<std::size_t>(spec.num_objects);
  std::vector<GenerationRecord> records;
  records.reserve(spec.prompts * spec.seeds_per_prompt);

  for (std::size_t p = 0; p < spec.prompts; ++p) {
    RngStream prompt_rng = rng.substream(p);
    std::vector<ObjectRef> objects;
    std::string prompt = "prompt " + std::to_string(p) + ":";
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t pick = (p + i) % std::size(kNames);
      std::string name = kNames[pick];
      if (i >= std::size(kNames)) name += "_" + std::to_string(i);
      prompt += " " + name;
      objects.push_back({i, std::move(name)});
    }
    std::vector<RelationSpec> relations;
    if (spec.with_relation) {
      relations.push_back({0, 1, static_cast<RelationKind>(draw_index(prompt_rng, 4))});
    }

    for (std::size_t s = 0; s < spec.seeds_per_prompt; ++s) {
      GenerationRecord r;
      r.prompt = prompt;
      r.seed = static_cast<std::int64_t>(s);
      r.generator_id = "synthetic";
      r.requested_objects = objects;
      r.relations = relations;

      std::vector<bool> present(k, true);
      if (!prompt_rng.bernoulli(spec.p_complete)) {
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = k - 1; i > 0; --i) std::swap(order[i], order[draw_index(prompt_rng, i + 1)]);
        const std::size_t missing = 1 + draw_index(prompt_rng, k);
        for (std::size_t i = 0; i < missing; ++i) present[order[i]] = false;
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (!present[i]) continue;
        r.present_objects.insert(i);
        const double x = prompt_rng.uniform();
        const double y = prompt_rng.uniform();
        r.centroids.emplace(i, Centroid(x, y));
      }
      for (int ct : spec.critical_timesteps) {
        std::vector<bool> labels(k);
        for (std::size_t i = 0; i < k; ++i) {
          labels[i] = spec.label_profile
                          ? stochastic_detect(objects[i], present[i], *spec.label_profile,
                                              prompt_rng)
                                .present
                          : bool(present[i]);
        }
        r.per_ct_predictions.emplace(ct, std::move(labels));
      }
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace head
