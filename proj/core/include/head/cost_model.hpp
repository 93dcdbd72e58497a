#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "head/detectors.hpp"
#include "head/rng.hpp"

namespace head {

/// Critical timesteps at which intermediate signals are recorded.
inline constexpr int kCriticalTimestepGrid[] = {0, 1, 2, 3, 4, 5, 6, 7, 8,
                                                9, 10, 12, 14, 16, 18, 20, 25, 40};

inline constexpr int kDefaultTotalSteps = 50;

struct CostModelParams {
  double p_complete = 0.5;  ///< P(a fresh seed yields a complete image), in (0, 1]
  DetectorProfile profile;
  int num_objects = 1;
  int critical_timestep = 25;
  int total_steps = kDefaultTotalSteps;
  double unit_time = 1.0;       ///< cost of one full generation
  double check_overhead = 0.0;  ///< cost of running the gate once, per attempt

  void validate() const;
  /// Cost of an attempt halted at the critical timestep.
  double abort_time() const;
};

struct SimulationResult {
  double time_saved_fraction = 0.0;
  double mean_time_with_head = 0.0;
  double mean_time_baseline = 0.0;
  std::size_t num_simulations = 0;
  double std_error = 0.0;  ///< standard error of time_saved_fraction
};

/// Monte Carlo estimate of the fraction of generation time saved by gating.
///
/// Each simulation draws fresh seeds until one is both truly complete and
/// predicted complete. A complete attempt always costs a full generation
/// (accepted or wrongly rejected); an incomplete one costs the abort time if
/// any object is flagged absent and a full generation otherwise.
///
/// Simulations are split into fixed-size blocks, each with its own substream
/// of `rng`, so the result is bit-identical for any `threads` value.
SimulationResult simulate_time_saved(const CostModelParams& params, std::size_t num_simulations,
                                     const RngStream& rng, unsigned threads = 1);

/// Expected total time per complete generation with gating.
double expected_time_with_head(const CostModelParams& params);

/// unit_time / p_complete
double expected_time_baseline(const CostModelParams& params);

/// Analytic counterpart of simulate_time_saved. With s = p * r^k and
/// f = 1 - (1 - tn)^k the expected time is
///   [p * u + (1 - p) * (f * u_ct + (1 - f) * u) + overhead] / s.
/// Throws DivergenceError when s == 0.
double expected_time_saved_closed_form(const CostModelParams& params);

struct SweepPoint {
  int critical_timestep = 0;
  DetectorProfile profile;
};

struct SweepRow {
  int critical_timestep = 0;
  DetectorProfile profile;
  double saving_closed_form = 0.0;
  std::optional<SimulationResult> monte_carlo;
};

/// Closed-form savings at each CT in `ct_grid`, holding base.profile fixed.
std::vector<SweepRow> sweep_critical_timestep(const CostModelParams& base,
                                              std::span<const int> ct_grid);

/// Closed-form savings with a separate detector profile per CT.
std::vector<SweepRow> sweep_critical_timestep(const CostModelParams& base,
                                              std::span<const SweepPoint> points);

/// Adds a Monte Carlo column to every row. Row i uses rng.substream(i).
void attach_monte_carlo(std::vector<SweepRow>& rows, const CostModelParams& base,
                        std::size_t num_simulations, const RngStream& rng, unsigned threads = 1);

/// Completion probability as a function of the number of requested objects.
using CompletionProfile = std::map<int, double>;

/// Measured four-object completion rates of two generator versions.
CompletionProfile completion_profile_sd14();
CompletionProfile completion_profile_sd2();

/// Saving over a workload whose object counts follow `mix` (weights need not
/// be normalized). Each k takes p_complete from `completion`.
double mixture_time_saved(const CostModelParams& base, const CompletionProfile& completion,
                          const std::map<int, double>& mix);

}  // namespace head
