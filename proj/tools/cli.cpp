#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "head/cost_model.hpp"
#include "head/errors.hpp"
#include "head/manifest.hpp"
#include "head/metrics.hpp"
#include "head/orchestrator.hpp"
#include "head/pfi.hpp"
#include "head/synthetic.hpp"

namespace head::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<int> default_ct_grid() {
  return {std::begin(kCriticalTimestepGrid), std::end(kCriticalTimestepGrid)};
}

struct DetectorFlags {
  std::optional<double> recall;
  std::optional<double> tn_rate;
  std::string profile;

  /// A profile only when one of the flags was given; missing rates default
  /// to a perfect detector.
  std::optional<DetectorProfile> resolve() const {
    if (!profile.empty()) {
      auto p = published_profile(profile).profile;
      if (recall) p.recall = *recall;
      if (tn_rate) p.tn_rate = *tn_rate;
      return p;
    }
    if (!recall && !tn_rate) return std::nullopt;
    DetectorProfile p{recall.value_or(1.0), tn_rate.value_or(1.0), "custom"};
    p.validate();
    return p;
  }
};

struct SimulateOptions {
  double p_complete = 0.3061;
  int num_objects = 4;
  DetectorFlags detector;
  std::vector<int> ct_grid = default_ct_grid();
  bool published = false;
  bool include_legacy = false;
  int total_steps = kDefaultTotalSteps;
  double unit_time = 1.0;
  double overhead = 0.0;
  std::size_t sims = 100000;
  std::string csv;
  std::string json;
};

struct OrchestrateOptions {
  std::string manifest;
  int ct = 25;
  int total_steps = kDefaultTotalSteps;
  int max_restarts = 5;
  double tolerance = kDefaultTolerance;
  DetectorFlags detector;
  bool no_relations = false;
  bool no_state_cache = false;
  std::string json = "-";
};

struct EvaluateOptions {
  std::string manifest;
  int n_min = 1;
  int n_max = 5;
  double tolerance = kDefaultTolerance;
  std::optional<int> ct;
  std::string json;
  std::string csv;
};

struct PfiOptions {
  int total_steps = kDefaultTotalSteps;
  std::optional<double> beta_start;
  std::optional<double> beta_end;
  std::vector<double> alpha_bar;
  std::size_t dim = 64;
  std::vector<int> ct_grid = default_ct_grid();
  double sigma = 0.1;
  std::size_t trials = 200;
  std::string csv;
  std::string json;
};

struct SynthOptions {
  std::size_t prompts = 100;
  std::size_t seeds_per_prompt = 5;
  int num_objects = 3;
  double p_complete = 0.3;
  std::vector<int> ct_grid = {25};
  bool relation = false;
  std::string out = "-";
};

struct Options {
  std::uint64_t rng_seed = 0;
  unsigned threads = 1;
  SimulateOptions simulate;
  OrchestrateOptions orchestrate;
  EvaluateOptions evaluate;
  PfiOptions pfi;
  SynthOptions synth;
};

class HeadApp : public CLI::App {
 public:
  HeadApp();
  Options opts;
  CLI::App* simulate = nullptr;
  CLI::App* orchestrate = nullptr;
  CLI::App* evaluate = nullptr;
  CLI::App* pfi = nullptr;
  CLI::App* synth = nullptr;
};

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--rng-seed", o.rng_seed, "Master seed; every random draw derives from it")
      ->envname(kSeedEnv)
      ->capture_default_str();
  sub.add_option("--threads", o.threads,
                 "Worker threads (results do not depend on this value)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_detector(CLI::App& sub, DetectorFlags& d) {
  sub.add_option("--recall", d.recall,
                 "Detector recall as a fraction in [0,1] (P(present | present))");
  sub.add_option("--tn-rate", d.tn_rate,
                 "Detector TN-rate as a fraction in [0,1] (P(absent | absent))");
  sub.add_option("--profile", d.profile,
                 "Published detector profile by label, e.g. \"HEaD 25\"; --recall/--tn-rate "
                 "override its fields");
}

HeadApp::HeadApp()
    : CLI::App("Early-abort gating, restart orchestration and cost simulation for "
               "multi-object image generation",
               "headctl") {
  require_subcommand(1);
  set_config("--config", "", "Read options from a TOML/INI key = value file; command-line "
                             "flags take precedence");
  set_help_all_flag("--help-all", "Show help for every subcommand");

  simulate = add_subcommand("simulate", "Sweep the time-saving cost model over critical timesteps");
  {
    auto& s = opts.simulate;
    simulate->add_option("--p", s.p_complete, "Probability that a fresh seed yields a complete image")
        ->capture_default_str();
    simulate->add_option("--k", s.num_objects, "Number of requested objects per prompt")
        ->capture_default_str();
    add_detector(*simulate, s.detector);
    simulate->add_option("--ct-grid", s.ct_grid, "Critical timesteps to sweep")
        ->delimiter(',')
        ->capture_default_str();
    simulate->add_flag("--published", s.published,
                       "Sweep the published per-timestep detector profiles instead of --ct-grid");
    simulate->add_flag("--include-legacy", s.include_legacy,
                       "With --published, also include the predecessor detector's rows");
    simulate->add_option("--total-steps", s.total_steps, "Diffusion steps per full generation")
        ->capture_default_str();
    simulate->add_option("--unit-time", s.unit_time, "Cost of one full generation")
        ->capture_default_str();
    simulate->add_option("--overhead", s.overhead, "Cost of one gate evaluation, per attempt")
        ->capture_default_str();
    simulate->add_option("--sims", s.sims, "Monte Carlo simulations per sweep row")
        ->capture_default_str();
    simulate->add_option("--csv", s.csv, "Write sweep rows as CSV to this path ('-' = stdout)");
    simulate->add_option("--json", s.json, "Write sweep rows as JSON to this path ('-' = stdout)");
    add_common(*simulate, opts);
  }

  orchestrate = add_subcommand("orchestrate", "Replay the restart policy over a manifest");
  {
    auto& o = opts.orchestrate;
    orchestrate->add_option("--manifest", o.manifest, "Manifest of recorded generations")
        ->required();
    orchestrate->add_option("--ct", o.ct, "Critical timestep at which the gate runs")
        ->capture_default_str();
    orchestrate->add_option("--total-steps", o.total_steps, "Diffusion steps per full generation")
        ->capture_default_str();
    orchestrate->add_option("--max-restarts", o.max_restarts,
                            "Seeds tried before falling back to the best one")
        ->capture_default_str();
    orchestrate->add_option("--tolerance", o.tolerance,
                            "Relation margin as a fraction of the image size")
        ->capture_default_str();
    add_detector(*orchestrate, o.detector);
    orchestrate->add_flag("--no-relations", o.no_relations,
                          "Gate on object presence only, ignoring recorded relations");
    orchestrate->add_flag("--no-state-cache", o.no_state_cache,
                          "Regenerate the fallback seed from scratch instead of resuming");
    orchestrate->add_option("--json", o.json, "Session trace output path ('-' = stdout)")
        ->capture_default_str();
    add_common(*orchestrate, opts);
  }

  evaluate = add_subcommand("evaluate", "Compute generation metrics from a manifest");
  {
    auto& e = opts.evaluate;
    evaluate->add_option("--manifest", e.manifest, "Manifest of labeled generations")->required();
    evaluate->add_option("--n-min", e.n_min, "Smallest N for MG-N")->capture_default_str();
    evaluate->add_option("--n-max", e.n_max, "Largest N for MG-N")->capture_default_str();
    evaluate->add_option("--tolerance", e.tolerance,
                         "Relation margin as a fraction of the image size")
        ->capture_default_str();
    evaluate->add_option("--ct", e.ct,
                         "Critical timestep whose recorded predictions feed recall/TN-rate");
    evaluate->add_option("--json", e.json, "Write the metric report as JSON ('-' = stdout)");
    evaluate->add_option("--csv", e.csv, "Write the metric report as CSV ('-' = stdout)");
    add_common(*evaluate, opts);
  }

  pfi = add_subcommand("pfi-demo", "Projection error of the predicted final image versus CT");
  {
    auto& p = opts.pfi;
    pfi->add_option("--total-steps", p.total_steps, "Schedule length T")->capture_default_str();
    pfi->add_option("--beta-start", p.beta_start,
                    "First beta of a linear schedule (default: 1e-4 scaled by 1000/T)");
    pfi->add_option("--beta-end", p.beta_end,
                    "Last beta of a linear schedule (default: 2e-2 scaled by 1000/T)");
    pfi->add_option("--alpha-bar", p.alpha_bar,
                    "Explicit alpha_bar table for t = 0..T (overrides the beta options)")
        ->delimiter(',');
    pfi->add_option("--dim", p.dim, "Latent dimension")->capture_default_str();
    pfi->add_option("--ct-grid", p.ct_grid, "Critical timesteps to evaluate")
        ->delimiter(',')
        ->capture_default_str();
    pfi->add_option("--sigma", p.sigma, "Std of the error added to the true noise")
        ->capture_default_str();
    pfi->add_option("--trials", p.trials, "Random (z0, noise) draws per timestep")
        ->capture_default_str();
    pfi->add_option("--csv", p.csv, "Write the error table as CSV ('-' = stdout)");
    pfi->add_option("--json", p.json, "Write the error table as JSON ('-' = stdout)");
    add_common(*pfi, opts);
  }

  synth = add_subcommand("synth", "Write a synthetic manifest");
  {
    auto& s = opts.synth;
    synth->add_option("--prompts", s.prompts, "Number of prompts")->capture_default_str();
    synth->add_option("--seeds-per-prompt", s.seeds_per_prompt, "Recorded seeds per prompt")
        ->capture_default_str();
    synth->add_option("--k", s.num_objects, "Objects per prompt")->capture_default_str();
    synth->add_option("--p-complete", s.p_complete, "Probability a record is complete")
        ->capture_default_str();
    synth->add_option("--ct-grid", s.ct_grid, "Timesteps at which labels are recorded")
        ->delimiter(',')
        ->capture_default_str();
    synth->add_flag("--relation", s.relation, "Attach one relation between objects 0 and 1");
    synth->add_option("--out", s.out, "Output path ('-' = stdout)")->capture_default_str();
    add_common(*synth, opts);
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) return;
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigurationError("cannot write '" + path + "'");
  f << text;
}

Json profile_json(const std::optional<DetectorProfile>& p) {
  if (!p) return nullptr;
  return {{"label", p->label}, {"recall", p->recall}, {"tn_rate", p->tn_rate}};
}

// --- simulate ---------------------------------------------------------------

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto& s = o.simulate;
  if (s.sims < 1) throw ParameterError("--sims must be at least 1");

  CostModelParams base;
  base.p_complete = s.p_complete;
  base.num_objects = s.num_objects;
  base.total_steps = s.total_steps;
  base.unit_time = s.unit_time;
  base.check_overhead = s.overhead;
  base.profile = s.detector.resolve().value_or(published_profile("HEaD 25").profile);

  std::vector<SweepPoint> points;
  if (s.published) {
    for (const auto& row : published_profiles()) {
      if (row.legacy && !s.include_legacy) continue;
      points.push_back({row.critical_timestep, row.profile});
    }
  } else {
    if (s.ct_grid.empty()) throw ParameterError("--ct-grid is empty");
    for (int ct : s.ct_grid) points.push_back({ct, base.profile});
  }
  for (const auto& p : points) {
    CostModelParams check = base;
    check.critical_timestep = p.critical_timestep;
    check.profile = p.profile;
    check.validate();
  }

  auto rows = sweep_critical_timestep(base, points);
  attach_monte_carlo(rows, base, s.sims, RngStream(o.rng_seed).substream("simulate"), o.threads);

  Json config = {{"p", s.p_complete},         {"k", s.num_objects},
                 {"profile", profile_json(base.profile)},
                 {"published", s.published},  {"include_legacy", s.include_legacy},
                 {"total_steps", s.total_steps}, {"unit_time", s.unit_time},
                 {"overhead", s.overhead},    {"sims", s.sims},
                 {"rng_seed", o.rng_seed}};

  std::string csv = "# " + config.dump() + "\n";
  csv += "ct,recall,tn_rate,p,k,saving_closed_form,saving_mc,std_error\n";
  Json json_rows = Json::array();
  out << fmt::format("{:>4} {:>8} {:>8} {:>12} {:>12} {:>10}\n", "ct", "recall", "tn_rate",
                     "closed_form", "monte_carlo", "std_err");
  for (const auto& r : rows) {
    const auto& mc = *r.monte_carlo;
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", r.critical_timestep, r.profile.recall,
                       r.profile.tn_rate, s.p_complete, s.num_objects, r.saving_closed_form,
                       mc.time_saved_fraction, mc.std_error);
    json_rows.push_back({{"ct", r.critical_timestep},
                         {"label", r.profile.label},
                         {"recall", r.profile.recall},
                         {"tn_rate", r.profile.tn_rate},
                         {"p", s.p_complete},
                         {"k", s.num_objects},
                         {"saving_closed_form", r.saving_closed_form},
                         {"saving_mc", mc.time_saved_fraction},
                         {"std_error", mc.std_error},
                         {"mean_time_with_head", mc.mean_time_with_head},
                         {"mean_time_baseline", mc.mean_time_baseline},
                         {"num_simulations", mc.num_simulations}});
    out << fmt::format("{:>4} {:>8.4f} {:>8.4f} {:>11.2f}% {:>11.2f}% {:>9.3f}%\n",
                       r.critical_timestep, r.profile.recall, r.profile.tn_rate,
                       100.0 * r.saving_closed_form, 100.0 * mc.time_saved_fraction,
                       100.0 * mc.std_error);
  }
  write_text(s.csv, csv, out);
  write_text(s.json, Json{{"config", config}, {"rows", json_rows}}.dump(2) + "\n", out);
  return kExitOk;
}

// --- orchestrate ------------------------------------------------------------

struct PromptOutcome {
  std::string prompt;
  std::optional<SessionResult> session;
  int baseline = 0;
  std::string error;
};

Json attempt_json(const AttemptOutcome& a) {
  Json failed_objects = Json::array();
  for (const auto& f : a.decision.failed_objects) failed_objects.push_back(f.index);
  Json failed_relations = Json::array();
  for (const auto& r : a.decision.failed_relations) {
    failed_relations.push_back({{"subject", r.subject}, {"object", r.object}, {"kind", to_string(r.kind)}});
  }
  return {{"seed", a.seed},
          {"disposition", to_string(a.disposition)},
          {"proceed", a.decision.proceed},
          {"presence_ok", a.decision.presence_ok},
          {"relations_ok", a.decision.relations_ok},
          {"failed_objects", failed_objects},
          {"failed_relations", failed_relations},
          {"predicted_present_count", a.predicted_present_count},
          {"steps_consumed", a.steps_consumed},
          {"final", a.final},
          {"truly_complete", a.truly_complete ? Json(*a.truly_complete) : Json(nullptr)}};
}

int cmd_orchestrate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto& c = o.orchestrate;
  const auto profile = c.detector.resolve();
  auto make_config = [&] {
    SessionConfig cfg;
    cfg.critical_timestep = c.ct;
    cfg.total_steps = c.total_steps;
    cfg.max_restarts = c.max_restarts;
    cfg.tolerance = c.tolerance;
    return cfg;
  };
  make_config().validate();

  const auto records = ingest_manifest_file(c.manifest);
  if (records.empty()) throw ParameterError("manifest '" + c.manifest + "' has no records");

  std::vector<std::string> order;
  std::map<std::string, std::vector<GenerationRecord>> groups;
  for (const auto& r : records) {
    auto [it, inserted] = groups.try_emplace(r.prompt);
    if (inserted) order.push_back(r.prompt);
    it->second.push_back(r);
  }

  const RngStream detector_root = RngStream(o.rng_seed).substream("detector");
  std::vector<PromptOutcome> outcomes(order.size());
  auto run_prompt = [&](std::size_t i) {
    auto& outcome = outcomes[i];
    outcome.prompt = order[i];
    const auto& recs = groups.at(order[i]);
    try {
      RngStream rng = detector_root.substream(i);
      auto cfg = make_config();
      outcome.baseline = baseline_steps(recs, cfg);
      outcome.session = replay_from_manifest(std::move(cfg), recs, profile, rng,
                                             !c.no_relations, !c.no_state_cache);
    } catch (const Error& e) {
      outcome.error = e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(o.threads, unsigned(order.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < order.size(); ++i) run_prompt(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < order.size(); i = next++) run_prompt(i);
      });
    }
  }

  Json sessions = Json::array();
  std::vector<SessionResult> ok;
  long steps = 0;
  long baseline = 0;
  std::size_t failures = 0;
  for (const auto& po : outcomes) {
    if (!po.session) {
      ++failures;
      sessions.push_back({{"prompt", po.prompt}, {"error", po.error}});
      err << "warning: prompt '" << po.prompt << "': " << po.error << "\n";
      continue;
    }
    const auto& s = *po.session;
    Json attempts = Json::array();
    for (const auto& a : s.attempts) attempts.push_back(attempt_json(a));
    sessions.push_back({{"prompt", po.prompt},
                        {"chosen_seed", s.chosen_seed},
                        {"total_steps_consumed", s.total_steps_consumed},
                        {"baseline_steps", po.baseline},
                        {"fallback_used", s.fallback_used},
                        {"fallback_mode", to_string(s.fallback_mode)},
                        {"attempts", attempts}});
    steps += s.total_steps_consumed;
    baseline += po.baseline;
    ok.push_back(s);
  }

  const auto trace = trace_confusion(ok);
  auto rate = [](std::size_t hit, std::size_t miss) -> Json {
    return hit + miss == 0 ? Json(nullptr) : Json(100.0 * double(hit) / double(hit + miss));
  };
  const Json saving = baseline > 0 ? Json(1.0 - double(steps) / double(baseline)) : Json(nullptr);
  Json aggregate = {{"prompts", outcomes.size()},
                    {"prompts_failed", failures},
                    {"steps_with_gating", steps},
                    {"steps_baseline", baseline},
                    {"saving", saving},
                    {"trace",
                     {{"tp", trace.tp},
                      {"fp", trace.fp},
                      {"tn", trace.tn},
                      {"fn", trace.fn},
                      {"recall", rate(trace.tp, trace.fn)},
                      {"tn_rate", rate(trace.tn, trace.fp)}}}};
  Json config = {{"manifest", c.manifest},
                 {"ct", c.ct},
                 {"total_steps", c.total_steps},
                 {"max_restarts", c.max_restarts},
                 {"tolerance", c.tolerance},
                 {"detector", profile_json(profile)},
                 {"relations", !c.no_relations},
                 {"state_cache", !c.no_state_cache},
                 {"rng_seed", o.rng_seed}};
  write_text(c.json, Json{{"config", config}, {"aggregate", aggregate}, {"sessions", sessions}}.dump(2) + "\n", out);

  if (c.json != "-") {
    out << fmt::format("prompts {}  failed {}  steps {} vs baseline {}", outcomes.size(), failures,
                       steps, baseline);
    if (baseline > 0) out << fmt::format("  saving {:.2f}%", 100.0 * (1.0 - double(steps) / double(baseline)));
    out << "\n";
  }
  return failures == outcomes.size() ? kExitData : kExitOk;
}

// --- evaluate ---------------------------------------------------------------

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto& e = o.evaluate;
  const auto records = ingest_manifest_file(e.manifest);
  if (records.empty()) throw ParameterError("manifest '" + e.manifest + "' has no records");

  ReportOptions ro{e.n_min, e.n_max, e.tolerance, e.ct};
  const auto report = build_report(records, ro);

  if (report.relations && !report.relations->relation_consistency) {
    err << "warning: relation consistency undefined (no record has both endpoints present)\n";
  }
  if (report.confusion && !report.confusion->recall) {
    err << "warning: recall undefined (no truly complete records)\n";
  }
  if (report.confusion && !report.confusion->tn_rate) {
    err << "warning: TN-rate undefined (no truly incomplete records)\n";
  }
  for (const auto& [n, entry] : report.mg) {
    if (!entry.std) err << "warning: MG" << n << " std undefined (fewer than two seeds)\n";
  }

  Json config = {{"manifest", e.manifest}, {"n_min", e.n_min},       {"n_max", e.n_max},
                 {"tolerance", e.tolerance}, {"ct", e.ct ? Json(*e.ct) : Json(nullptr)},
                 {"rng_seed", o.rng_seed}};
  out << fmt::format("{:>6} {:>9} {:>9}\n", "metric", "mean", "std");
  for (const auto& [n, entry] : report.mg) {
    out << fmt::format("{:>6} {:>9.2f} {:>9}\n", "MG" + std::to_string(n), entry.mean,
                       entry.std ? fmt::format("{:.2f}", *entry.std) : "-");
  }
  if (report.relations) {
    const auto& r = *report.relations;
    out << fmt::format("MG2 {:.2f}  MG-loc {:.2f}  consistency {}\n", r.mg2, r.mg_loc,
                       r.relation_consistency ? fmt::format("{:.2f}", *r.relation_consistency) : "null");
  }
  if (report.confusion) {
    const auto& cf = *report.confusion;
    out << fmt::format("ct {}  TP {} FP {} TN {} FN {}  recall {}  TN-rate {}\n", *report.confusion_ct,
                       cf.tp, cf.fp, cf.tn, cf.fn,
                       cf.recall ? fmt::format("{:.2f}", *cf.recall) : "null",
                       cf.tn_rate ? fmt::format("{:.2f}", *cf.tn_rate) : "null");
  }
  write_text(e.json, report_to_json(report, config.dump()), out);
  write_text(e.csv, "# " + config.dump() + "\n" + report_to_csv(report), out);
  return kExitOk;
}

// --- pfi-demo ---------------------------------------------------------------

int cmd_pfi(const Options& o, std::ostream& out) {
  const auto& p = o.pfi;
  NoiseSchedule schedule = [&] {
    if (!p.alpha_bar.empty()) return NoiseSchedule::from_alpha_bar(p.alpha_bar);
    if (p.beta_start || p.beta_end) {
      const double scale = 1000.0 / std::max(1, p.total_steps);
      return NoiseSchedule::linear(p.total_steps, p.beta_start.value_or(1e-4 * scale),
                                   p.beta_end.value_or(2e-2 * scale));
    }
    return NoiseSchedule::scaled_linear(p.total_steps);
  }();
  if (p.ct_grid.empty()) throw ParameterError("--ct-grid is empty");
  for (int ct : p.ct_grid) {
    if (ct < 0 || ct > schedule.total_steps()) {
      throw ParameterError("critical timestep " + std::to_string(ct) + " outside the schedule");
    }
  }
  const auto rows = projection_error_sweep(schedule, p.dim, p.ct_grid, p.sigma, p.trials,
                                           RngStream(o.rng_seed).substream("pfi"));

  Json config = {{"total_steps", schedule.total_steps()},
                 {"alpha_bar", schedule.table()},
                 {"dim", p.dim},
                 {"sigma", p.sigma},
                 {"trials", p.trials},
                 {"rng_seed", o.rng_seed}};
  std::string csv = "# " + config.dump() + "\nct,alpha_bar,mean_relative_error\n";
  Json json_rows = Json::array();
  out << fmt::format("{:>4} {:>12} {:>14}\n", "ct", "alpha_bar", "rel_error");
  for (const auto& r : rows) {
    const double a = schedule.alpha_bar(r.critical_timestep);
    csv += fmt::format("{},{},{}\n", r.critical_timestep, a, r.mean_relative_error);
    json_rows.push_back({{"ct", r.critical_timestep},
                         {"alpha_bar", a},
                         {"mean_relative_error", r.mean_relative_error}});
    out << fmt::format("{:>4} {:>12.6g} {:>14.6g}\n", r.critical_timestep, a, r.mean_relative_error);
  }
  write_text(p.csv, csv, out);
  write_text(p.json, Json{{"config", config}, {"rows", json_rows}}.dump(2) + "\n", out);
  return kExitOk;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const Options& o, std::ostream& out) {
  const auto& s = o.synth;
  SyntheticSpec spec;
  spec.prompts = s.prompts;
  spec.seeds_per_prompt = s.seeds_per_prompt;
  spec.num_objects = s.num_objects;
  spec.p_complete = s.p_complete;
  spec.critical_timesteps = s.ct_grid;
  spec.with_relation = s.relation;
  const auto records = make_synthetic_records(spec, RngStream(o.rng_seed).substream("synth"));
  write_text(s.out, serialize_manifest(records), out);
  return kExitOk;
}

}  // namespace

std::unique_ptr<CLI::App> make_app() { return std::make_unique<HeadApp>(); }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  HeadApp app;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (app.simulate->parsed()) return cmd_simulate(app.opts, out);
    if (app.orchestrate->parsed()) return cmd_orchestrate(app.opts, out, err);
    if (app.evaluate->parsed()) return cmd_evaluate(app.opts, out, err);
    if (app.pfi->parsed()) return cmd_pfi(app.opts, out);
    if (app.synth->parsed()) return cmd_synth(app.opts, out);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const ConsistencyError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "error: no subcommand\n";
  return kExitUsage;
}

}  // namespace head::cli
