#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "pesmc/objective.hpp"
#include "pesmc/rng.hpp"
#include "pesmc/samples.hpp"

namespace pesmc {

class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normalized importance weights for the annealed target f^lambda:
// w_i proportional to exp(lambda*log_f_i - log_q_i), max-subtracted.
inline Eigen::VectorXd importance_weights(const Eigen::VectorXd& log_f,
                                          const Eigen::VectorXd& log_q, double lambda) {
  if (log_f.size() != log_q.size() || log_f.size() < 1)
    throw std::invalid_argument("importance_weights: log_f/log_q size mismatch");
  if (!(lambda > 0.0))
    throw std::invalid_argument("importance_weights: lambda must be positive");
  Eigen::VectorXd lw = lambda * log_f - log_q;
  const double mx = lw.maxCoeff();
  if (!std::isfinite(mx))
    throw DegenerateWeightsError("importance_weights: all log-weights degenerate");
  Eigen::VectorXd w = (lw.array() - mx).exp();
  const double total = w.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw DegenerateWeightsError("importance_weights: weight normalization failed");
  return w / total;
}

inline void reweight(WeightedSamples& s, double lambda) {
  s.w = importance_weights(s.log_f, s.log_q, lambda);
  s.log_w = lambda * s.log_f - s.log_q;
  s.lambda = lambda;
}

inline double ess(const Eigen::VectorXd& w) { return 1.0 / w.squaredNorm(); }

inline double ness(const Eigen::VectorXd& w) {
  return ess(w) / static_cast<double>(w.size());
}

// n_out categorical draws by weight; outputs carry uniform weight 1/n_out.
inline Eigen::MatrixXd multinomial_resample(const WeightedSamples& samples, Eigen::Index n_out,
                                            RngStream& rng) {
  if (n_out < 0) throw std::invalid_argument("multinomial_resample: n_out must be nonnegative");
  Eigen::VectorXd cum(samples.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    acc += samples.w[i];
    cum[i] = acc;
  }
  Eigen::MatrixXd out(n_out, samples.dim());
  for (Eigen::Index i = 0; i < n_out; ++i)
    out.row(i) = samples.points.row(categorical_from_cumulative(cum, rng.uniform01()));
  return out;
}

struct MetropolisResult {
  Eigen::MatrixXd points;
  Eigen::VectorXd log_f;
  double accept_rate = 0.0;
};

// Componentwise Metropolis move targeting pi_lambda: each sample is tuned one
// coordinate at a time with a symmetric Gaussian proposal, accepted with
// probability min{1, exp(lambda*(log f(x') - log f(x)))}. Weights are not
// touched; the kernel leaves pi_lambda invariant. Each sample owns its own
// sub-stream, so results do not depend on how the loop is scheduled.
inline MetropolisResult cw_metropolis(const Eigen::MatrixXd& points, const Eigen::VectorXd& log_f_in,
                                      double lambda, const Eigen::VectorXd& step_sigma, int sweeps,
                                      const ObjectiveSpec& spec, RngStream& rng) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (step_sigma.size() != d)
    throw std::invalid_argument("cw_metropolis: step_sigma dimension mismatch");
  for (Eigen::Index j = 0; j < d; ++j)
    if (step_sigma[j] < 0.0)
      throw std::invalid_argument("cw_metropolis: step_sigma must be nonnegative");
  if (sweeps < 1) throw std::invalid_argument("cw_metropolis: sweeps must be >= 1");

  MetropolisResult res;
  res.points = points;
  res.log_f = log_f_in;
  long long accepted = 0;
  Eigen::VectorXd x(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    RngStream sub = rng.child(static_cast<std::uint64_t>(i));
    x = res.points.row(i).transpose();
    double lf = res.log_f[i];
    for (int s = 0; s < sweeps; ++s) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double old_xj = x[j];
        x[j] = old_xj + step_sigma[j] * sub.normal();
        const double lf_new = log_f(spec, x);
        const double log_ratio = lambda * (lf_new - lf);
        if (log_ratio >= 0.0 || std::log(sub.uniform01_pos()) < log_ratio) {
          lf = lf_new;
          ++accepted;
        } else {
          x[j] = old_xj;
        }
      }
    }
    res.points.row(i) = x.transpose();
    res.log_f[i] = lf;
  }
  const long long proposals = static_cast<long long>(n) * d * sweeps;
  res.accept_rate = proposals > 0 ? static_cast<double>(accepted) / proposals : 0.0;
  return res;
}

}  // namespace pesmc
