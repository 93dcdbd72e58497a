#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace head {

/// Default relation tolerance: 5% of the image size, per axis.
inline constexpr double kDefaultTolerance = 0.05;

struct ObjectRef {
  std::size_t index = 0;  ///< 0-based position in the prompt's object list
  std::string name;

  friend bool operator==(const ObjectRef&, const ObjectRef&) = default;
};

/// Normalized image position. Origin at the top-left, y grows downward.
class Centroid {
 public:
  Centroid(double x, double y);

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

  friend bool operator==(const Centroid&, const Centroid&) = default;

 private:
  double x_;
  double y_;
};

enum class RelationKind { top, bottom, left, right };

std::string_view to_string(RelationKind kind);
/// Throws ParameterError for anything other than top/bottom/left/right.
RelationKind parse_relation_kind(std::string_view text);

/// "subject is <kind> of object", both given as object-list indices.
struct RelationSpec {
  std::size_t subject = 0;
  std::size_t object = 0;
  RelationKind kind = RelationKind::left;

  friend bool operator==(const RelationSpec&, const RelationSpec&) = default;
};

struct PresencePrediction {
  ObjectRef object;
  bool present = false;

  friend bool operator==(const PresencePrediction&, const PresencePrediction&) = default;
};

struct GateDecision {
  bool proceed = false;
  bool presence_ok = false;
  bool relations_ok = false;
  std::vector<ObjectRef> failed_objects;
  std::vector<RelationSpec> failed_relations;
};

using CentroidMap = std::map<std::size_t, Centroid>;

/// True iff the subject satisfies `kind` relative to the object with a
/// margin strictly greater than `tolerance`:
///   left   x_s + tol < x_o        right  x_s > x_o + tol
///   top    y_s + tol < y_o        bottom y_s > y_o + tol
/// Throws ParameterError unless tolerance is in [0, 0.5).
bool check_relation(const Centroid& subject, const Centroid& object, RelationKind kind,
                    double tolerance = kDefaultTolerance);

/// Conjunction of all presence predictions. Rejects an empty list: a prompt
/// with no target objects is malformed.
bool gate_presence(std::span<const PresencePrediction> predictions);

/// Joint presence + relation gate. Relation endpoints must name objects in
/// `predictions` (ConsistencyError otherwise). A relation whose endpoint has
/// no centroid cannot be verified and counts as violated.
GateDecision gate_joint(std::span<const PresencePrediction> predictions,
                        std::span<const RelationSpec> relations, const CentroidMap& centroids,
                        double tolerance = kDefaultTolerance);

}  // namespace head
