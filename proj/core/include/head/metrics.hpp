#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "head/gating.hpp"
#include "head/records.hpp"

namespace head {

/// Percentage of records in which at least `n` requested objects are present.
double compute_mg_n(std::span<const GenerationRecord> records, int n);

struct SeedStats {
  double mean = 0.0;
  double std = 0.0;  ///< population standard deviation
  std::vector<std::pair<std::int64_t, double>> per_seed;  ///< ascending seed
};

/// MG-N computed separately for each seed, then mean and population std
/// across seeds. Needs at least two distinct seeds.
SeedStats compute_seed_stats(std::span<const GenerationRecord> records, int n);

struct RelationMetrics {
  double mg2 = 0.0;     ///< % with both relation endpoints present
  double mg_loc = 0.0;  ///< % with both present and the relation satisfied
  std::optional<double> relation_consistency;  ///< 100 * mg_loc / mg2, null if mg2 == 0
  std::size_t count = 0;
};

/// Two-object relation metrics; every record must carry exactly one relation.
/// Relations are checked on ground-truth centroids.
RelationMetrics compute_relation_metrics(std::span<const GenerationRecord> records,
                                         double tolerance = kDefaultTolerance);

/// Image-level confusion at a critical timestep. Positive = a complete image
/// allowed to proceed. Rates are percentages, null when their class is empty.
struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::optional<double> recall;
  std::optional<double> tn_rate;
};

Confusion compute_confusion(std::span<const GenerationRecord> records, int ct);

struct MgEntry {
  double mean = 0.0;
  std::optional<double> std;  ///< null with fewer than two seeds
  std::size_t count = 0;      ///< seeds averaged over (1 when pooled)
};

struct MetricReport {
  std::size_t num_records = 0;
  std::map<int, MgEntry> mg;
  std::optional<RelationMetrics> relations;
  std::optional<int> confusion_ct;
  std::optional<Confusion> confusion;
};

struct ReportOptions {
  int n_min = 1;
  int n_max = 5;
  double tolerance = kDefaultTolerance;
  std::optional<int> ct;
};

/// Aggregates every metric the records support. Relation metrics use the
/// records carrying exactly one relation; they are omitted when none do.
MetricReport build_report(std::span<const GenerationRecord> records, const ReportOptions& options);

/// JSON text; undefined metrics serialize as null.
std::string report_to_json(const MetricReport& report, const std::string& config_json = "{}");

/// CSV with columns metric,n,mean,std,count. Empty cells are nulls.
std::string report_to_csv(const MetricReport& report);

}  // namespace head
