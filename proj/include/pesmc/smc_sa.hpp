#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "pesmc/annealing.hpp"
#include "pesmc/is_ops.hpp"
#include "pesmc/objective.hpp"
#include "pesmc/pe_smc.hpp"
#include "pesmc/rng.hpp"
#include "pesmc/run_result.hpp"

namespace pesmc {

struct SmcSaConfig {
  int n_samples = 0;   // 0 resolves to default_sample_size(dim)
  double t1 = 0.0;     // initial temperature; <= 0 auto-scales to the
                       // objective's range over the initial population
  double gamma = 0.95;
  double proposal_scale = 0.05;  // times box width per axis
  int stall_iters = 10;
  double stall_tol = 1e-6;
  int max_iters = 200;
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 0) throw std::invalid_argument("SmcSaConfig: n_samples must be >= 0");
    if (!(gamma > 0.0 && gamma < 1.0))
      throw std::invalid_argument("SmcSaConfig: gamma must lie in (0,1)");
    if (!(proposal_scale > 0.0))
      throw std::invalid_argument("SmcSaConfig: proposal_scale must be positive");
    if (stall_iters < 1) throw std::invalid_argument("SmcSaConfig: stall_iters must be positive");
    if (!(stall_tol > 0.0)) throw std::invalid_argument("SmcSaConfig: stall_tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("SmcSaConfig: max_iters must be positive");
  }
};

// SMC-SA baseline: Boltzmann-weighted reweighting, multinomial resampling and
// one full-vector Metropolis step per iteration under geometric cooling.
// Samples start uniform on the box and out-of-bounds proposals are rejected,
// so the population never leaves the solution space. The trace's lambda
// column carries 1/T_k; the components column is fixed at 0.
inline RunResult run_smc_sa(const ObjectiveSpec& spec_in, const SmcSaConfig& cfg_in) {
  cfg_in.validate();
  spec_in.validate();
  SmcSaConfig cfg = cfg_in;
  if (cfg.n_samples == 0) cfg.n_samples = default_sample_size(spec_in.dim);
  const Eigen::Index n = cfg.n_samples;
  const Eigen::Index d = spec_in.dim;

  RunResult result;
  result.seed = cfg.seed;
  result.best_f = -std::numeric_limits<double>::infinity();
  result.best_x = spec_in.bounds.center();
  long long evals = 0;

  const auto base_eval = spec_in.eval;
  auto eval = [&result, &evals, &base_eval](const Eigen::VectorXd& x) {
    const double v = base_eval(x);
    ++evals;
    if (v > result.best_f) {
      result.best_f = v;
      result.best_x = x;
    }
    return v;
  };

  RngStream root(cfg.seed);
  Eigen::MatrixXd pts(n, d);
  Eigen::VectorXd fv(n);
  {
    RngStream init_rng = root.child(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < d; ++j)
        pts(i, j) = spec_in.bounds.lower[j] +
                    init_rng.uniform01() * (spec_in.bounds.upper[j] - spec_in.bounds.lower[j]);
      fv[i] = eval(pts.row(i).transpose());
    }
  }

  double t1 = cfg.t1;
  if (!(t1 > 0.0)) {
    const double range = fv.maxCoeff() - fv.minCoeff();
    t1 = range > 0.0 ? range / std::log(static_cast<double>(std::max<Eigen::Index>(n, 2)))
                     : 1.0;
  }

  const Eigen::VectorXd step = cfg.proposal_scale * spec_in.bounds.width();
  const Eigen::VectorXd zero_logq = Eigen::VectorXd::Zero(n);

  double t_prev = 0.0;
  double stall_ref = std::numeric_limits<double>::quiet_NaN();
  int stall_count = 0;
  Eigen::VectorXd y(d);

  for (int k = 1; k <= cfg.max_iters; ++k) {
    const double t_k = boltzmann_schedule(t1, cfg.gamma, k);
    // Boltzmann weight update exp(f * (1/T_k - 1/T_{k-1})), max-subtracted
    const double exponent = (k == 1) ? 1.0 / t_k : (1.0 / t_k - 1.0 / t_prev);
    const Eigen::VectorXd w = importance_weights(fv, zero_logq, exponent);
    const double ness_k = ness(w);

    {
      RngStream resample_rng = root.child(static_cast<std::uint64_t>(k)).child(1);
      Eigen::VectorXd cum(n);
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += w[i];
        cum[i] = acc;
      }
      Eigen::MatrixXd new_pts(n, d);
      Eigen::VectorXd new_fv(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index src = categorical_from_cumulative(cum, resample_rng.uniform01());
        new_pts.row(i) = pts.row(src);
        new_fv[i] = fv[src];
      }
      pts.swap(new_pts);
      fv.swap(new_fv);
    }

    long long accepted = 0;
    RngStream met_rng = root.child(static_cast<std::uint64_t>(k)).child(2);
    for (Eigen::Index i = 0; i < n; ++i) {
      RngStream sub = met_rng.child(static_cast<std::uint64_t>(i));
      for (Eigen::Index j = 0; j < d; ++j) y[j] = pts(i, j) + step[j] * sub.normal();
      if (!in_bounds(spec_in.bounds, y)) continue;
      const double fy = eval(y);
      const double log_ratio = (fy - fv[i]) / t_k;
      if (log_ratio >= 0.0 || std::log(sub.uniform01_pos()) < log_ratio) {
        pts.row(i) = y.transpose();
        fv[i] = fy;
        ++accepted;
      }
    }

    TraceRow row;
    row.k = k;
    row.lambda = 1.0 / t_k;
    row.ness = ness_k;
    row.components = 0;
    row.best_f = result.best_f;
    row.accept_rate = static_cast<double>(accepted) / static_cast<double>(n);
    result.trace.push_back(row);
    result.iterations = k;

    if (std::isnan(stall_ref)) {
      stall_ref = result.best_f;
    } else if (result.best_f - stall_ref > cfg.stall_tol * std::abs(stall_ref)) {
      stall_ref = result.best_f;
      stall_count = 0;
    } else {
      ++stall_count;
    }
    if (stall_count >= cfg.stall_iters) break;
    t_prev = t_k;
  }

  result.evaluations = evals;
  return result;
}

}  // namespace pesmc
