#include "head/gating.hpp"

#include <algorithm>
#include <cmath>

#include "head/errors.hpp"

namespace head {

Centroid::Centroid(double x, double y) : x_(x), y_(y) {
  if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
    throw ParameterError("centroid (" + std::to_string(x) + ", " + std::to_string(y) +
                         ") outside the unit square");
  }
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::top:
      return "top";
    case RelationKind::bottom:
      return "bottom";
    case RelationKind::left:
      return "left";
    case RelationKind::right:
      return "right";
  }
  return "?";
}

RelationKind parse_relation_kind(std::string_view text) {
  if (text == "top") return RelationKind::top;
  if (text == "bottom") return RelationKind::bottom;
  if (text == "left") return RelationKind::left;
  if (text == "right") return RelationKind::right;
  throw ParameterError("unknown relation kind '" + std::string(text) + "'");
}

bool check_relation(const Centroid& subject, const Centroid& object, RelationKind kind,
                    double tolerance) {
  if (!(tolerance >= 0.0 && tolerance < 0.5)) {
    throw ParameterError("relation tolerance must lie in [0, 0.5), got " +
                         std::to_string(tolerance));
  }
  switch (kind) {
    case RelationKind::left:
      return subject.x() + tolerance < object.x();
    case RelationKind::right:
      return subject.x() > object.x() + tolerance;
    case RelationKind::top:
      return subject.y() + tolerance < object.y();
    case RelationKind::bottom:
      return subject.y() > object.y() + tolerance;
  }
  return false;
}

bool gate_presence(std::span<const PresencePrediction> predictions) {
  if (predictions.empty()) throw ParameterError("presence gate needs at least one object");
  return std::all_of(predictions.begin(), predictions.end(),
                     [](const PresencePrediction& p) { return p.present; });
}

GateDecision gate_joint(std::span<const PresencePrediction> predictions,
                        std::span<const RelationSpec> relations, const CentroidMap& centroids,
                        double tolerance) {
  if (predictions.empty()) throw ParameterError("presence gate needs at least one object");
  if (!(tolerance >= 0.0 && tolerance < 0.5)) {
    throw ParameterError("relation tolerance must lie in [0, 0.5)");
  }

  auto known = [&](std::size_t index) {
    return std::any_of(predictions.begin(), predictions.end(),
                       [&](const PresencePrediction& p) { return p.object.index == index; });
  };

  GateDecision decision;
  for (const auto& p : predictions) {
    if (!p.present) decision.failed_objects.push_back(p.object);
  }

  for (const auto& r : relations) {
    if (!known(r.subject) || !known(r.object)) {
      throw ConsistencyError("relation (" + std::to_string(r.subject) + ", " +
                             std::to_string(r.object) + ", " + std::string(to_string(r.kind)) +
                             ") references an object outside the prompt");
    }
    if (r.subject == r.object) {
      throw ConsistencyError("relation subject and object coincide (index " +
                             std::to_string(r.subject) + ")");
    }
    auto s = centroids.find(r.subject);
    auto o = centroids.find(r.object);
    const bool holds = s != centroids.end() && o != centroids.end() &&
                       check_relation(s->second, o->second, r.kind, tolerance);
    if (!holds) decision.failed_relations.push_back(r);
  }

  decision.presence_ok = decision.failed_objects.empty();
  decision.relations_ok = decision.failed_relations.empty();
  decision.proceed = decision.presence_ok && decision.relations_ok;
  return decision;
}

}  // namespace head
