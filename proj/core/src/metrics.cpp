#include "head/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "head/errors.hpp"

namespace head {

namespace {

using Json = nlohmann::ordered_json;

double percent(std::size_t hits, std::size_t total) { return 100.0 * double(hits) / double(total); }

Json nullable(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : ""; }

}  // namespace

double compute_mg_n(std::span<const GenerationRecord> records, int n) {
  if (n < 1) throw ParameterError("MG-N needs N >= 1");
  if (records.empty()) throw ParameterError("MG-N over an empty record set");
  const auto hits = std::count_if(records.begin(), records.end(), [&](const GenerationRecord& r) {
    return r.present_count() >= static_cast<std::size_t>(n);
  });
  return percent(static_cast<std::size_t>(hits), records.size());
}

SeedStats compute_seed_stats(std::span<const GenerationRecord> records, int n) {
  std::map<std::int64_t, std::vector<GenerationRecord>> by_seed;
  for (const auto& r : records) by_seed[r.seed].push_back(r);
  if (by_seed.size() < 2) {
    throw ParameterError("seed statistics need at least two seeds, got " +
                         std::to_string(by_seed.size()));
  }
  SeedStats stats;
  for (const auto& [seed, group] : by_seed) stats.per_seed.emplace_back(seed, compute_mg_n(group, n));
  double sum = 0.0;
  for (const auto& [seed, v] : stats.per_seed) sum += v;
  stats.mean = sum / double(stats.per_seed.size());
  double sq = 0.0;
  for (const auto& [seed, v] : stats.per_seed) sq += (v - stats.mean) * (v - stats.mean);
  stats.std = std::sqrt(sq / double(stats.per_seed.size()));
  return stats;
}

RelationMetrics compute_relation_metrics(std::span<const GenerationRecord> records,
                                         double tolerance) {
  if (records.empty()) throw ParameterError("relation metrics over an empty record set");
  std::size_t both = 0;
  std::size_t satisfied = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.relations.size() != 1) {
      throw ParameterError("record " + std::to_string(i) + " carries " +
                           std::to_string(r.relations.size()) +
                           " relations; relation metrics need exactly one");
    }
    const auto& rel = r.relations.front();
    if (!r.is_present(rel.subject) || !r.is_present(rel.object)) continue;
    ++both;
    auto s = r.centroids.find(rel.subject);
    auto o = r.centroids.find(rel.object);
    if (s == r.centroids.end() || o == r.centroids.end()) {
      throw DataError("present relation endpoint without a centroid", long(i), "centroids");
    }
    if (check_relation(s->second, o->second, rel.kind, tolerance)) ++satisfied;
  }
  RelationMetrics m;
  m.count = records.size();
  m.mg2 = percent(both, records.size());
  m.mg_loc = percent(satisfied, records.size());
  if (both > 0) m.relation_consistency = percent(satisfied, both);
  return m;
}

Confusion compute_confusion(std::span<const GenerationRecord> records, int ct) {
  Confusion c;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto it = r.per_ct_predictions.find(ct);
    if (it == r.per_ct_predictions.end()) {
      throw DataError("no predictions at critical timestep " + std::to_string(ct), long(i),
                      "per_ct_predictions");
    }
    const bool predicted = std::all_of(it->second.begin(), it->second.end(), [](bool b) { return b; });
    if (r.complete()) {
      (predicted ? c.tp : c.fn)++;
    } else {
      (predicted ? c.fp : c.tn)++;
    }
  }
  if (c.tp + c.fn > 0) c.recall = percent(c.tp, c.tp + c.fn);
  if (c.tn + c.fp > 0) c.tn_rate = percent(c.tn, c.tn + c.fp);
  return c;
}

MetricReport build_report(std::span<const GenerationRecord> records, const ReportOptions& options) {
  if (records.empty()) throw ParameterError("cannot report on an empty record set");
  if (options.n_min < 1 || options.n_max < options.n_min) {
    throw ParameterError("invalid MG range [" + std::to_string(options.n_min) + ", " +
                         std::to_string(options.n_max) + "]");
  }
  MetricReport report;
  report.num_records = records.size();

  std::map<std::int64_t, int> seeds;
  for (const auto& r : records) seeds[r.seed]++;
  for (int n = options.n_min; n <= options.n_max; ++n) {
    MgEntry entry;
    if (seeds.size() >= 2) {
      const auto stats = compute_seed_stats(records, n);
      entry.mean = stats.mean;
      entry.std = stats.std;
      entry.count = stats.per_seed.size();
    } else {
      entry.mean = compute_mg_n(records, n);
      entry.count = 1;
    }
    report.mg[n] = entry;
  }

  std::vector<GenerationRecord> with_relation;
  for (const auto& r : records) {
    if (r.relations.size() == 1) with_relation.push_back(r);
  }
  if (!with_relation.empty()) {
    report.relations = compute_relation_metrics(with_relation, options.tolerance);
  }

  if (options.ct) {
    report.confusion_ct = options.ct;
    report.confusion = compute_confusion(records, *options.ct);
  }
  return report;
}

std::string report_to_json(const MetricReport& report, const std::string& config_json) {
  Json j;
  j["config"] = Json::parse(config_json);
  j["num_records"] = report.num_records;
  j["std_kind"] = "population";
  Json mg = Json::object();
  for (const auto& [n, e] : report.mg) {
    mg[std::to_string(n)] = {{"mean", e.mean}, {"std", nullable(e.std)}, {"count", e.count}};
  }
  j["mg"] = std::move(mg);
  if (report.relations) {
    j["mg2"] = report.relations->mg2;
    j["mg_loc"] = report.relations->mg_loc;
    j["relation_consistency"] = nullable(report.relations->relation_consistency);
  } else {
    j["mg2"] = nullptr;
    j["mg_loc"] = nullptr;
    j["relation_consistency"] = nullptr;
  }
  if (report.confusion) {
    const auto& c = *report.confusion;
    j["ct"] = *report.confusion_ct;
    j["recall"] = nullable(c.recall);
    j["tn_rate"] = nullable(c.tn_rate);
    j["counts"] = {{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
  } else {
    j["ct"] = nullptr;
    j["recall"] = nullptr;
    j["tn_rate"] = nullptr;
    j["counts"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const MetricReport& report) {
  std::string out = "metric,n,mean,std,count\n";
  for (const auto& [n, e] : report.mg) {
    out += fmt::format("mg,{},{},{},{}\n", n, e.mean, cell(e.std), e.count);
  }
  if (report.relations) {
    const auto& r = *report.relations;
    out += fmt::format("mg2,2,{},,{}\n", r.mg2, r.count);
    out += fmt::format("mg_loc,2,{},,{}\n", r.mg_loc, r.count);
    out += fmt::format("relation_consistency,2,{},,{}\n", cell(r.relation_consistency), r.count);
  }
  if (report.confusion) {
    const auto& c = *report.confusion;
    out += fmt::format("recall,,{},,{}\n", cell(c.recall), c.tp + c.fn);
    out += fmt::format("tn_rate,,{},,{}\n", cell(c.tn_rate), c.tn + c.fp);
  }
  return out;
}

}  // namespace head
