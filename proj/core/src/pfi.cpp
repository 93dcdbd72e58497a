#include "head/pfi.hpp"

#include <cmath>

#include "head/errors.hpp"

namespace head {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(b) +
                         " does not match latent dimension " + std::to_string(a));
  }
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

NoiseSchedule NoiseSchedule::from_alpha_bar(std::vector<double> alpha_bar) {
  if (alpha_bar.size() < 2) throw ScheduleError("schedule needs at least one step");
  if (alpha_bar.front() != 1.0) throw ScheduleError("alpha_bar[0] must equal 1");
  for (std::size_t t = 0; t < alpha_bar.size(); ++t) {
    if (!(alpha_bar[t] > 0.0 && alpha_bar[t] <= 1.0)) {
      throw ScheduleError("alpha_bar[" + std::to_string(t) + "] outside (0, 1]");
    }
    if (t > 0 && !(alpha_bar[t] < alpha_bar[t - 1])) {
      throw ScheduleError("alpha_bar must be strictly decreasing (violated at t=" +
                          std::to_string(t) + ")");
    }
  }
  return NoiseSchedule(std::move(alpha_bar));
}

NoiseSchedule NoiseSchedule::linear(int total_steps, double beta_start, double beta_end) {
  if (total_steps < 1) throw ScheduleError("total_steps must be at least 1");
  if (!(beta_start > 0.0 && beta_end > 0.0 && beta_start < 1.0 && beta_end < 1.0)) {
    throw ScheduleError("beta range must lie in (0, 1)");
  }
  std::vector<double> alpha_bar(static_cast<std::size_t>(total_steps) + 1);
  alpha_bar[0] = 1.0;
  for (int t = 1; t <= total_steps; ++t) {
    const double frac = total_steps == 1 ? 0.0 : double(t - 1) / double(total_steps - 1);
    const double beta = beta_start + (beta_end - beta_start) * frac;
    alpha_bar[t] = alpha_bar[t - 1] * (1.0 - beta);
  }
  return from_alpha_bar(std::move(alpha_bar));
}

NoiseSchedule NoiseSchedule::scaled_linear(int total_steps) {
  if (total_steps < 1) throw ScheduleError("total_steps must be at least 1");
  const double scale = 1000.0 / total_steps;
  return linear(total_steps, 1e-4 * scale, 2e-2 * scale);
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t < 0 || t > total_steps()) {
    throw ScheduleError("timestep " + std::to_string(t) + " outside [0, " +
                        std::to_string(total_steps()) + "]");
  }
  return alpha_bar_[static_cast<std::size_t>(t)];
}

LinearDecoder::LinearDecoder(std::size_t rows, std::size_t cols, std::vector<double> weights)
    : rows_(rows), cols_(cols), weights_(std::move(weights)) {
  if (rows_ == 0 || cols_ == 0) throw DimensionError("decoder must be non-empty");
  if (weights_.size() != rows_ * cols_) {
    throw DimensionError("decoder weights do not match " + std::to_string(rows_) + "x" +
                         std::to_string(cols_));
  }
}

LinearDecoder LinearDecoder::identity(std::size_t dim) {
  std::vector<double> w(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) w[i * dim + i] = 1.0;
  return LinearDecoder(dim, dim, std::move(w));
}

std::vector<double> LinearDecoder::apply(std::span<const double> z) const {
  if (z.size() != cols_) {
    throw DimensionError("decoder expects " + std::to_string(cols_) + " inputs, got " +
                         std::to_string(z.size()));
  }
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += weights_[r * cols_ + c] * z[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> predict_x0(const LatentState& state, std::span<const double> epsilon,
                               const NoiseSchedule& schedule) {
  if (state.z.empty()) throw DimensionError("latent must have at least one component");
  require_same_dim(state.z.size(), epsilon.size(), "noise estimate");
  const double a = schedule.alpha_bar(state.t);
  if (state.t == 0) return state.z;
  const double signal = std::sqrt(a);
  const double noise = std::sqrt(1.0 - a);
  std::vector<double> x0(state.z.size());
  for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = (state.z[i] - noise * epsilon[i]) / signal;
  return x0;
}

LatentState scheduler_update(const LatentState& state, std::span<const double> epsilon,
                             int t_next, const NoiseSchedule& schedule) {
  if (t_next < 0 || t_next >= state.t) {
    throw OrderingError("scheduler step must move to an earlier timestep: " +
                        std::to_string(state.t) + " -> " + std::to_string(t_next));
  }
  auto x0 = predict_x0(state, epsilon, schedule);
  if (t_next == 0) return {std::move(x0), 0};
  const double a = schedule.alpha_bar(t_next);
  const double signal = std::sqrt(a);
  const double noise = std::sqrt(1.0 - a);
  LatentState next{std::vector<double>(x0.size()), t_next};
  for (std::size_t i = 0; i < x0.size(); ++i) next.z[i] = signal * x0[i] + noise * epsilon[i];
  return next;
}

PfiResult project_pfi(const LatentState& state, std::span<const double> epsilon,
                      const NoiseSchedule& schedule, const LinearDecoder& decoder) {
  if (decoder.cols() != state.z.size()) {
    throw DimensionError("decoder expects " + std::to_string(decoder.cols()) +
                         "-dimensional latents, got " + std::to_string(state.z.size()));
  }
  PfiResult result;
  result.source_timestep = state.t;
  result.predicted_final_latent =
      state.t == 0 ? predict_x0(state, epsilon, schedule)
                   : scheduler_update(state, epsilon, 0, schedule).z;
  result.decoded = decoder.apply(result.predicted_final_latent);
  return result;
}

LatentState noise_latent(std::span<const double> z0, std::span<const double> epsilon, int t,
                         const NoiseSchedule& schedule) {
  require_same_dim(z0.size(), epsilon.size(), "noise");
  const double a = schedule.alpha_bar(t);
  const double signal = std::sqrt(a);
  const double noise = std::sqrt(1.0 - a);
  LatentState s{std::vector<double>(z0.size()), t};
  for (std::size_t i = 0; i < z0.size(); ++i) s.z[i] = signal * z0[i] + noise * epsilon[i];
  return s;
}

std::vector<ProjectionErrorRow> projection_error_sweep(const NoiseSchedule& schedule,
                                                       std::size_t dim,
                                                       std::span<const int> timesteps,
                                                       double sigma, std::size_t trials,
                                                       RngStream rng) {
  if (dim == 0) throw ParameterError("latent dimension must be at least 1");
  if (trials == 0) throw ParameterError("need at least one trial");
  if (!(sigma >= 0.0)) throw ParameterError("sigma must be non-negative");
  for (int t : timesteps) (void)schedule.alpha_bar(t);

  std::vector<ProjectionErrorRow> rows;
  for (int t : timesteps) rows.push_back({t, 0.0});

  const auto decoder = LinearDecoder::identity(dim);
  std::vector<double> z0(dim), eps(dim), eps_hat(dim);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    for (std::size_t i = 0; i < dim; ++i) {
      z0[i] = rng.normal();
      eps[i] = rng.normal();
      eps_hat[i] = eps[i] + sigma * rng.normal();
    }
    const double scale = norm(z0);
    for (auto& row : rows) {
      const auto state = noise_latent(z0, eps, row.critical_timestep, schedule);
      const auto pfi = project_pfi(state, eps_hat, schedule, decoder);
      double err = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double d = pfi.decoded[i] - z0[i];
        err += d * d;
      }
      row.mean_relative_error += std::sqrt(err) / scale;
    }
  }
  for (auto& row : rows) row.mean_relative_error /= double(trials);
  return rows;
}

}  // namespace head
