#include "head/cost_model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "head/errors.hpp"

namespace head {

namespace {

constexpr std::size_t kBlockSize = 4096;

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / double(n);
    m2 += delta * (x - mean);
  }

  // Chan et al. pairwise merge.
  void merge(const Moments& other) {
    if (other.n == 0) return;
    if (n == 0) {
      *this = other;
      return;
    }
    const double total = double(n + other.n);
    const double delta = other.mean - mean;
    mean += delta * double(other.n) / total;
    m2 += other.m2 + delta * delta * double(n) * double(other.n) / total;
    n += other.n;
  }
};

double simulate_one(const CostModelParams& p, double abort_cost, RngStream& rng) {
  double total = 0.0;
  for (;;) {
    total += p.check_overhead;
    if (rng.uniform() < p.p_complete) {
      bool predicted_complete = true;
      for (int i = 0; i < p.num_objects; ++i) {
        if (!(rng.uniform() < p.profile.recall)) {
          predicted_complete = false;
          break;
        }
      }
      total += p.unit_time;  // TP and FN both pay the full run
      if (predicted_complete) return total;
    } else {
      bool flagged = false;
      for (int i = 0; i < p.num_objects; ++i) {
        if (rng.uniform() < p.profile.tn_rate) {
          flagged = true;
          break;
        }
      }
      total += flagged ? abort_cost : p.unit_time;
    }
  }
}

}  // namespace

void CostModelParams::validate() const {
  if (!(p_complete > 0.0 && p_complete <= 1.0)) {
    throw ParameterError("p_complete must be in (0, 1], got " + std::to_string(p_complete));
  }
  profile.validate();
  if (num_objects < 1) throw ParameterError("num_objects must be at least 1");
  if (total_steps < 1) throw ParameterError("total_steps must be at least 1");
  if (critical_timestep < 0 || critical_timestep > total_steps) {
    throw ParameterError("critical timestep " + std::to_string(critical_timestep) +
                         " outside [0, " + std::to_string(total_steps) + "]");
  }
  if (!(unit_time > 0.0)) throw ParameterError("unit_time must be positive");
  if (!(check_overhead >= 0.0)) throw ParameterError("check_overhead must be non-negative");
}

double CostModelParams::abort_time() const {
  return double(critical_timestep) / double(total_steps) * unit_time;
}

double expected_time_baseline(const CostModelParams& params) {
  params.validate();
  return params.unit_time / params.p_complete;
}

double expected_time_with_head(const CostModelParams& params) {
  params.validate();
  const double p = params.p_complete;
  const double k = params.num_objects;
  const double accept = p * std::pow(params.profile.recall, k);
  if (!(accept > 0.0)) {
    throw DivergenceError("no attempt can be accepted (p_complete * recall^k == 0)");
  }
  const double flag = 1.0 - std::pow(1.0 - params.profile.tn_rate, k);
  const double cycle = p * params.unit_time +
                       (1.0 - p) * (flag * params.abort_time() + (1.0 - flag) * params.unit_time) +
                       params.check_overhead;
  return cycle / accept;
}

double expected_time_saved_closed_form(const CostModelParams& params) {
  return 1.0 - expected_time_with_head(params) / expected_time_baseline(params);
}

SimulationResult simulate_time_saved(const CostModelParams& params, std::size_t num_simulations,
                                     const RngStream& rng, unsigned threads) {
  params.validate();
  if (num_simulations < 1) throw ParameterError("num_simulations must be at least 1");
  if (!(params.p_complete * std::pow(params.profile.recall, params.num_objects) > 0.0)) {
    throw DivergenceError("no attempt can be accepted (p_complete * recall^k == 0)");
  }

  const std::size_t blocks = (num_simulations + kBlockSize - 1) / kBlockSize;
  std::vector<Moments> partial(blocks);
  const double abort_cost = params.abort_time();

  auto run_block = [&](std::size_t b) {
    RngStream stream = rng.substream(b);
    const std::size_t begin = b * kBlockSize;
    const std::size_t end = std::min(num_simulations, begin + kBlockSize);
    Moments m;
    for (std::size_t i = begin; i < end; ++i) m.add(simulate_one(params, abort_cost, stream));
    partial[b] = m;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, unsigned(blocks)));
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  }

  Moments total;
  for (const auto& m : partial) total.merge(m);

  SimulationResult result;
  result.num_simulations = num_simulations;
  result.mean_time_with_head = total.mean;
  result.mean_time_baseline = params.unit_time / params.p_complete;
  result.time_saved_fraction = 1.0 - total.mean / result.mean_time_baseline;
  const double variance = total.n > 1 ? total.m2 / double(total.n - 1) : 0.0;
  result.std_error = std::sqrt(variance / double(total.n)) / result.mean_time_baseline;
  return result;
}

std::vector<SweepRow> sweep_critical_timestep(const CostModelParams& base,
                                              std::span<const int> ct_grid) {
  std::vector<SweepPoint> points;
  points.reserve(ct_grid.size());
  for (int ct : ct_grid) points.push_back({ct, base.profile});
  return sweep_critical_timestep(base, points);
}

std::vector<SweepRow> sweep_critical_timestep(const CostModelParams& base,
                                              std::span<const SweepPoint> points) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& point : points) {
    CostModelParams params = base;
    params.critical_timestep = point.critical_timestep;
    params.profile = point.profile;
    rows.push_back({point.critical_timestep, point.profile,
                    expected_time_saved_closed_form(params), std::nullopt});
  }
  return rows;
}

void attach_monte_carlo(std::vector<SweepRow>& rows, const CostModelParams& base,
                        std::size_t num_simulations, const RngStream& rng, unsigned threads) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CostModelParams params = base;
    params.critical_timestep = rows[i].critical_timestep;
    params.profile = rows[i].profile;
    rows[i].monte_carlo = simulate_time_saved(params, num_simulations, rng.substream(i), threads);
  }
}

CompletionProfile completion_profile_sd14() { return {{4, 0.2696}}; }
CompletionProfile completion_profile_sd2() { return {{4, 0.3061}}; }

double mixture_time_saved(const CostModelParams& base, const CompletionProfile& completion,
                          const std::map<int, double>& mix) {
  double weight_sum = 0.0;
  double with_head = 0.0;
  double baseline = 0.0;
  for (const auto& [k, w] : mix) {
    if (!(w >= 0.0)) throw ParameterError("mixture weights must be non-negative");
    if (w == 0.0) continue;
    auto it = completion.find(k);
    if (it == completion.end()) {
      throw ParameterError("no completion probability for " + std::to_string(k) + " objects");
    }
    CostModelParams params = base;
    params.num_objects = k;
    params.p_complete = it->second;
    with_head += w * expected_time_with_head(params);
    baseline += w * expected_time_baseline(params);
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw ParameterError("mixture has no positive weight");
  return 1.0 - with_head / baseline;
}

}  // namespace head
