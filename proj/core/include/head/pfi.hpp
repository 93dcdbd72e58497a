#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "head/rng.hpp"

namespace head {

/// Cumulative signal levels alpha_bar[t] for t = 0..T.
/// Invariants: alpha_bar[0] == 1, strictly decreasing, all values in (0, 1].
class NoiseSchedule {
 public:
  /// Validates and adopts an explicit table (ScheduleError on violation).
  static NoiseSchedule from_alpha_bar(std::vector<double> alpha_bar);

  /// Linear beta ramp from beta_start to beta_end over `total_steps` steps,
  /// alpha_bar[t] = prod_{i<=t} (1 - beta_i).
  static NoiseSchedule linear(int total_steps, double beta_start, double beta_end);

  /// The reference schedule: the 1000-step linear range [1e-4, 2e-2]
  /// rescaled by 1000 / total_steps so a short chain reaches the same
  /// terminal noise level.
  static NoiseSchedule scaled_linear(int total_steps = 50);

  int total_steps() const noexcept { return static_cast<int>(alpha_bar_.size()) - 1; }
  double alpha_bar(int t) const;
  const std::vector<double>& table() const noexcept { return alpha_bar_; }

 private:
  explicit NoiseSchedule(std::vector<double> alpha_bar) : alpha_bar_(std::move(alpha_bar)) {}
  std::vector<double> alpha_bar_;
};

struct LatentState {
  std::vector<double> z;
  int t = 0;
};

/// Dense row-major linear map standing in for the image decoder.
class LinearDecoder {
 public:
  LinearDecoder(std::size_t rows, std::size_t cols, std::vector<double> weights);
  static LinearDecoder identity(std::size_t dim);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::vector<double> apply(std::span<const double> z) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> weights_;
};

struct PfiResult {
  std::vector<double> predicted_final_latent;
  std::vector<double> decoded;
  int source_timestep = 0;
};

/// x0 estimate (z_t - sqrt(1 - a_t) * eps) / sqrt(a_t). Identity at t = 0.
std::vector<double> predict_x0(const LatentState& state, std::span<const double> epsilon,
                               const NoiseSchedule& schedule);

/// Deterministic DDIM step (eta = 0) from state.t down to t_next.
LatentState scheduler_update(const LatentState& state, std::span<const double> epsilon,
                             int t_next, const NoiseSchedule& schedule);

/// Projects the latent at the critical timestep to t = 0 and decodes it.
PfiResult project_pfi(const LatentState& state, std::span<const double> epsilon,
                      const NoiseSchedule& schedule, const LinearDecoder& decoder);

/// z_t = sqrt(a_t) * z0 + sqrt(1 - a_t) * eps
LatentState noise_latent(std::span<const double> z0, std::span<const double> epsilon, int t,
                         const NoiseSchedule& schedule);

struct ProjectionErrorRow {
  int critical_timestep = 0;
  double mean_relative_error = 0.0;
};

/// Mean relative reconstruction error ||x0_hat - z0|| / ||z0|| of the PFI when
/// the noise estimate is eps + sigma * N(0, I). Each trial reuses the same
/// (z0, eps, perturbation) draw across all timesteps.
std::vector<ProjectionErrorRow> projection_error_sweep(const NoiseSchedule& schedule,
                                                       std::size_t dim,
                                                       std::span<const int> timesteps,
                                                       double sigma, std::size_t trials,
                                                       RngStream rng);

}  // namespace head
