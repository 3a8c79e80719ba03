#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

#include "pesmc/annealing.hpp"
#include "pesmc/is_ops.hpp"
#include "pesmc/objective.hpp"
#include "pesmc/rng.hpp"
#include "pesmc/run_result.hpp"
#include "pesmc/tmix.hpp"

namespace pesmc {

// Sample-size defaults per dimension used throughout the benchmark protocol.
inline int default_sample_size(Eigen::Index dim) {
  if (dim <= 2) return 500;
  if (dim <= 5) return 2000;
  if (dim <= 10) return 5000;
  return 50000;
}

struct PeSmcConfig {
  int n_samples = 0;  // 0 resolves to default_sample_size(dim)
  double lambda1 = 1.0;
  double beta = 0.8;
  double ness_threshold = 0.3;
  int max_new_components_per_iter = 30;
  int em_rounds_per_batch = 3;
  double alpha_min = 1e-3;
  int m_max = 100;
  int metropolis_sweeps = 1;
  double metropolis_step_scale = 0.01;  // times box width per axis
  int stall_iters = 10;
  double stall_tol = 1e-6;
  int max_iters = 200;
  std::uint64_t seed = 0;
  double nu = 5.0;
  double lambda_cap_mult = 10.0;
  double lambda_max = 1e12;
  bool em_sigma_include_u = false;
  bool record_mixtures = false;

  void validate() const {
    if (n_samples < 0) throw std::invalid_argument("PeSmcConfig: n_samples must be >= 0");
    if (!(lambda1 > 0.0)) throw std::invalid_argument("PeSmcConfig: lambda1 must be positive");
    if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("PeSmcConfig: beta in (0,1)");
    if (!(ness_threshold > 0.0 && ness_threshold < 1.0))
      throw std::invalid_argument("PeSmcConfig: ness_threshold in (0,1)");
    if (max_new_components_per_iter < 1)
      throw std::invalid_argument("PeSmcConfig: max_new_components_per_iter must be positive");
    if (em_rounds_per_batch < 0)
      throw std::invalid_argument("PeSmcConfig: em_rounds_per_batch must be >= 0");
    if (!(alpha_min > 0.0 && alpha_min < 1.0))
      throw std::invalid_argument("PeSmcConfig: alpha_min in (0,1)");
    if (m_max < 1) throw std::invalid_argument("PeSmcConfig: m_max must be positive");
    if (metropolis_sweeps < 1)
      throw std::invalid_argument("PeSmcConfig: metropolis_sweeps must be positive");
    if (!(metropolis_step_scale >= 0.0))
      throw std::invalid_argument("PeSmcConfig: metropolis_step_scale must be >= 0");
    if (stall_iters < 1) throw std::invalid_argument("PeSmcConfig: stall_iters must be positive");
    if (!(stall_tol > 0.0)) throw std::invalid_argument("PeSmcConfig: stall_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("PeSmcConfig: max_iters must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("PeSmcConfig: nu must be positive");
    if (!(lambda_cap_mult > 1.0))
      throw std::invalid_argument("PeSmcConfig: lambda_cap_mult must exceed 1");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("PeSmcConfig: lambda_max must be positive");
  }
};

struct PeOutcome {
  TMixture mix;
  WeightedSamples samples;
  double accept_rate = 0.0;
  int additions = 0;
  bool ness_met = true;
};

namespace detail {

inline double log_add_exp(double a, double b) {
  const double mx = std::max(a, b);
  return mx + std::log1p(std::exp(std::min(a, b) - mx));
}

inline Eigen::VectorXd eval_log_f_rows(const ObjectiveSpec& spec, const Eigen::MatrixXd& pts) {
  Eigen::VectorXd out(pts.rows());
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    out[i] = log_f(spec, pts.row(i).transpose());
  return out;
}

}  // namespace detail

// One pass of the posterior-exploration procedure: IS draw, componentwise
// Metropolis, weighted-EM refit, then component addition driven by NESS.
// Every objective evaluation goes through spec.eval, so callers wanting
// best-so-far tracking or evaluation counts wrap the spec.
inline PeOutcome pe_procedure(const TMixture& mix_in, double lambda, const ObjectiveSpec& spec,
                              const PeSmcConfig& cfg, const RngStream& rng) {
  if (cfg.n_samples < 1)
    throw std::invalid_argument("pe_procedure: cfg.n_samples must be resolved (>= 1)");
  if (!(lambda > 0.0)) throw std::invalid_argument("pe_procedure: lambda must be positive");
  const Eigen::Index n = cfg.n_samples;

  TMixture mix = mix_in;
  WeightedSamples s;
  {
    RngStream draw_rng = rng.child(1);
    s.points = sample(mix, n, draw_rng);
  }
  s.log_f = detail::eval_log_f_rows(spec, s.points);
  s.log_q = log_pdf_rows(mix, s.points);
  reweight(s, lambda);

  const Eigen::VectorXd step = cfg.metropolis_step_scale * spec.bounds.width();
  RngStream met_rng = rng.child(2);
  MetropolisResult moved =
      cw_metropolis(s.points, s.log_f, lambda, step, cfg.metropolis_sweeps, spec, met_rng);
  s.points = moved.points;
  s.log_f = moved.log_f;

  for (int r = 0; r < cfg.em_rounds_per_batch; ++r) {
    s.log_q = log_pdf_rows(mix, s.points);
    reweight(s, lambda);
    mix = em_update(mix, s, cfg.em_sigma_include_u);
  }
  s.log_q = log_pdf_rows(mix, s.points);
  reweight(s, lambda);

  int additions = 0;
  double ness_now = ness(s.w);
  const Eigen::Index n_fresh = std::max<Eigen::Index>(n / 10, 50);
  RngStream add_rng = rng.child(3);
  const double log_keep = std::log(0.9), log_new = std::log(0.1);

  while (ness_now < cfg.ness_threshold && additions < cfg.max_new_components_per_iter &&
         static_cast<int>(mix.size()) < cfg.m_max) {
    Eigen::Index best = -1;
    double best_w = -1.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s.w[i] > best_w && in_bounds(spec.bounds, s.points.row(i).transpose())) {
        best_w = s.w[i];
        best = i;
      }
    }
    if (best < 0) break;  // nothing in bounds to anchor a new component on

    mix = add_component(mix, s.points.row(best).transpose(), spec.bounds);
    ++additions;
    const TComponent& added = mix.components.back();

    RngStream fresh_rng = add_rng.child(static_cast<std::uint64_t>(additions));
    Eigen::MatrixXd fresh = sample_component(added, n_fresh, fresh_rng);
    Eigen::VectorXd fresh_lf = detail::eval_log_f_rows(spec, fresh);
    Eigen::VectorXd fresh_lq = log_pdf_rows(mix, fresh);

    // existing points: q' = 0.9 q + 0.1 S_new, updated in the log domain
    Eigen::VectorXd maha, lp_new;
    detail::component_stats(added, s.points, maha, lp_new);
    for (Eigen::Index i = 0; i < s.size(); ++i)
      s.log_q[i] = detail::log_add_exp(log_keep + s.log_q[i], log_new + lp_new[i]);

    const Eigen::Index old_n = s.size();
    s.points.conservativeResize(old_n + n_fresh, Eigen::NoChange);
    s.points.bottomRows(n_fresh) = fresh;
    s.log_f.conservativeResize(old_n + n_fresh);
    s.log_f.tail(n_fresh) = fresh_lf;
    s.log_q.conservativeResize(old_n + n_fresh);
    s.log_q.tail(n_fresh) = fresh_lq;
    reweight(s, lambda);
    ness_now = ness(s.w);

    if (additions % 10 == 0) {
      RngStream redraw_rng = add_rng.child(1000 + static_cast<std::uint64_t>(additions));
      s.points = sample(mix, n, redraw_rng);
      s.log_f = detail::eval_log_f_rows(spec, s.points);
      for (int r = 0; r < cfg.em_rounds_per_batch; ++r) {
        s.log_q = log_pdf_rows(mix, s.points);
        reweight(s, lambda);
        mix = em_update(mix, s, cfg.em_sigma_include_u);
      }
      mix = prune(mix, cfg.alpha_min);
      s.log_q = log_pdf_rows(mix, s.points);
      reweight(s, lambda);
      ness_now = ness(s.w);
    }
  }

  PeOutcome out;
  out.mix = std::move(mix);
  out.samples = std::move(s);
  out.accept_rate = moved.accept_rate;
  out.additions = additions;
  out.ness_met = ness_now >= cfg.ness_threshold;
  return out;
}

// Full PE-SMC run: iterates the PE procedure under the adaptive lambda
// schedule until the best value stalls or max_iters is reached.
inline RunResult run_pe_smc(const ObjectiveSpec& spec_in, const PeSmcConfig& cfg_in) {
  cfg_in.validate();
  spec_in.validate();
  PeSmcConfig cfg = cfg_in;
  if (cfg.n_samples == 0) cfg.n_samples = default_sample_size(spec_in.dim);

  RunResult result;
  result.seed = cfg.seed;
  result.best_f = -std::numeric_limits<double>::infinity();
  result.best_x = spec_in.bounds.center();
  long long evals = 0;

  ObjectiveSpec spec = spec_in;
  const auto base_eval = spec_in.eval;
  spec.eval = [&result, &evals, &base_eval](const Eigen::VectorXd& x) {
    const double v = base_eval(x);
    ++evals;
    if (v > result.best_f) {
      result.best_f = v;
      result.best_x = x;
    }
    return v;
  };

  const Eigen::Index d = spec.dim;
  Eigen::MatrixXd sigma0 = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double s = (spec.bounds.upper[j] - spec.bounds.lower[j]) / 4.0;
    sigma0(j, j) = s * s;
  }
  TMixture mix;
  mix.components.emplace_back(1.0, spec.bounds.center(), sigma0, cfg.nu);

  if (cfg.record_mixtures) result.mixture_trace = nlohmann::json::array();

  RngStream root(cfg.seed);
  double lambda = cfg.lambda1;
  double lambda_prev = std::numeric_limits<double>::quiet_NaN();
  double stall_ref = std::numeric_limits<double>::quiet_NaN();
  int stall_count = 0;

  for (int k = 1; k <= cfg.max_iters; ++k) {
    RngStream iter_rng = root.child(static_cast<std::uint64_t>(k));
    PeOutcome out;
    try {
      out = pe_procedure(mix, lambda, spec, cfg, iter_rng);
    } catch (const DegenerateWeightsError&) {
      // retry once with a smaller lambda step before giving up
      lambda = std::isnan(lambda_prev) ? lambda / 10.0 : std::sqrt(lambda_prev * lambda);
      out = pe_procedure(mix, lambda, spec, cfg, iter_rng.child(4));
    }
    mix = out.mix;

    TraceRow row;
    row.k = k;
    row.lambda = lambda;
    row.ness = ness(out.samples.w);
    row.components = static_cast<int>(mix.size());
    row.best_f = result.best_f;
    row.accept_rate = out.accept_rate;
    row.additions = out.additions;
    row.ness_met = out.ness_met;
    result.trace.push_back(row);
    if (cfg.record_mixtures) result.mixture_trace.push_back(mixture_to_json(mix, k));
    result.iterations = k;

    if (std::isnan(stall_ref)) {
      stall_ref = result.best_f;
    } else if (result.best_f - stall_ref > cfg.stall_tol * std::abs(stall_ref)) {
      stall_ref = result.best_f;
      stall_count = 0;
    } else {
      ++stall_count;
    }
    if (stall_count >= cfg.stall_iters || k == cfg.max_iters) break;

    AnnealState state;
    state.k = k;
    state.lambda = lambda;
    state.ess = ess(out.samples.w);
    state.beta = cfg.beta;
    state.lambda_cap_mult = cfg.lambda_cap_mult;
    state.lambda_max = cfg.lambda_max;
    lambda_prev = lambda;
    lambda = next_lambda(out.samples.log_f, out.samples.log_q, state);
  }

  result.evaluations = evals;
  return result;
}

}  // namespace pesmc
