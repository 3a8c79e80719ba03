#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "pesmc/is_ops.hpp"

namespace pesmc {

// State of the adaptive temperature schedule at iteration k.
struct AnnealState {
  int k = 1;
  double lambda = 1.0;
  double ess = std::numeric_limits<double>::quiet_NaN();
  double beta = 0.8;
  double lambda_cap_mult = 10.0;
  double lambda_max = 1e12;
};

// h(lambda): the ESS the current sample set would have if reweighted for the
// target f^lambda.
inline double ess_at_lambda(const Eigen::VectorXd& log_f, const Eigen::VectorXd& log_q,
                            double lambda) {
  return ess(importance_weights(log_f, log_q, lambda));
}

// Solves h(lambda) = beta * ESS_k on (lambda_k, cap] by doubling then
// bisection. If h never reaches the target inside the cap, or h is found to
// rise along the doubling bracket (degenerate landscape), returns the cap.
// The cap is lambda_cap_mult * lambda_k, clipped to lambda_max; once lambda_k
// itself has reached lambda_max, the result keeps growing by a factor of
// (1 + 1e-6) so the schedule stays strictly increasing.
inline double next_lambda(const Eigen::VectorXd& log_f, const Eigen::VectorXd& log_q,
                          const AnnealState& state) {
  const double lk = state.lambda;
  if (!(lk > 0.0)) throw std::invalid_argument("next_lambda: lambda_k must be positive");
  const double cap = state.lambda_cap_mult * lk;
  auto finish = [&](double v) {
    v = std::min(v, state.lambda_max);
    if (v <= lk) v = lk * (1.0 + 1e-6);
    return v;
  };

  const double ess_k = ess_at_lambda(log_f, log_q, lk);
  const double target = state.beta * ess_k;

  double lo = lk, h_lo = ess_k;
  double cand = 2.0 * lk;
  for (;;) {
    cand = std::min(cand, cap);
    const double h_cand = ess_at_lambda(log_f, log_q, cand);
    if (h_cand > h_lo * (1.0 + 1e-12)) return finish(cap);  // non-monotone bracket
    if (h_cand <= target) break;
    if (cand >= cap) return finish(cap);
    lo = cand;
    h_lo = h_cand;
    cand *= 2.0;
  }

  double hi = cand;
  for (int it = 0; it < 60 && (hi - lo) > 1e-3 * lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ess_at_lambda(log_f, log_q, mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return finish(0.5 * (lo + hi));
}

// Geometric cooling for the SMC-SA baseline: T_k = T_1 * gamma^(k-1).
inline double boltzmann_schedule(double t1, double gamma, int k) {
  if (!(t1 > 0.0)) throw std::invalid_argument("boltzmann_schedule: T_1 must be positive");
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("boltzmann_schedule: gamma must lie in (0,1)");
  if (k < 1) throw std::invalid_argument("boltzmann_schedule: k must be >= 1");
  return t1 * std::pow(gamma, k - 1);
}

}  // namespace pesmc
