#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pesmc/objective.hpp"
#include "pesmc/rng.hpp"
#include "pesmc/samples.hpp"

namespace pesmc {

class NonSpdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One Student's-t mixing component. The Cholesky factor of the scale matrix
// and the log normalizing constant are cached at construction; components are
// immutable afterwards.
struct TComponent {
  double alpha;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  double nu;
  Eigen::MatrixXd chol;  // lower triangular L with L L^T = sigma
  double log_norm;       // lgamma((nu+d)/2) - lgamma(nu/2) - (d/2)log(pi nu) - log|L|

  TComponent(double alpha_, Eigen::VectorXd mu_, Eigen::MatrixXd sigma_, double nu_)
      : alpha(alpha_), mu(std::move(mu_)), sigma(std::move(sigma_)), nu(nu_) {
    if (!(alpha > 0.0)) throw std::invalid_argument("TComponent: alpha must be positive");
    if (!(nu > 0.0)) throw std::invalid_argument("TComponent: nu must be positive");
    const Eigen::Index d = mu.size();
    if (sigma.rows() != d || sigma.cols() != d)
      throw std::invalid_argument("TComponent: sigma shape must match mu");
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
      throw NonSpdError("TComponent: scale matrix is not positive definite");
    chol = llt.matrixL();
    double log_det_l = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      if (!(chol(j, j) > 0.0))
        throw NonSpdError("TComponent: non-positive Cholesky pivot");
      log_det_l += std::log(chol(j, j));
    }
    const double dd = static_cast<double>(d);
    log_norm = std::lgamma(0.5 * (nu + dd)) - std::lgamma(0.5 * nu) -
               0.5 * dd * std::log(M_PI * nu) - log_det_l;
  }

  Eigen::Index dim() const { return mu.size(); }

  double log_pdf(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z = chol.triangularView<Eigen::Lower>().solve(x - mu);
    const double maha = z.squaredNorm();
    return log_norm - 0.5 * (nu + static_cast<double>(dim())) * std::log1p(maha / nu);
  }
};

struct TMixture {
  std::vector<TComponent> components;

  Eigen::Index dim() const { return components.front().dim(); }
  std::size_t size() const { return components.size(); }
  double nu() const { return components.front().nu; }

  void validate() const {
    if (components.empty()) throw std::invalid_argument("TMixture: needs at least one component");
    double s = 0.0;
    for (const TComponent& c : components) s += c.alpha;
    if (std::abs(s - 1.0) > 1e-12)
      throw std::invalid_argument("TMixture: component masses must sum to 1");
  }
};

// (y-mu)^T Sigma^-1 (y-mu) via triangular solve against the Cholesky factor.
inline double mahalanobis_sq(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                             const Eigen::VectorXd& y) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NonSpdError("mahalanobis_sq: matrix is not positive definite");
  Eigen::VectorXd z = llt.matrixL().solve(y - mu);
  return z.squaredNorm();
}

namespace detail {

// Per-row Mahalanobis distances and component log-densities for a batch of
// points, sharing one triangular solve.
inline void component_stats(const TComponent& c, const Eigen::MatrixXd& pts,
                            Eigen::VectorXd& maha_out, Eigen::VectorXd& log_pdf_out) {
  const Eigen::Index n = pts.rows();
  Eigen::MatrixXd diff = (pts.rowwise() - c.mu.transpose()).transpose();  // d x n
  c.chol.triangularView<Eigen::Lower>().solveInPlace(diff);
  maha_out = diff.colwise().squaredNorm().transpose();
  const double half_exp = 0.5 * (c.nu + static_cast<double>(c.dim()));
  log_pdf_out.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    log_pdf_out[i] = c.log_norm - half_exp * std::log1p(maha_out[i] / c.nu);
}

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// Symmetrize and jitter-regularize a candidate scale matrix until the
// Cholesky factorization succeeds, escalating the jitter tenfold each try.
inline TComponent make_component_regularized(double alpha, const Eigen::VectorXd& mu,
                                             Eigen::MatrixXd sigma, double nu) {
  const Eigen::Index d = mu.size();
  sigma = symmetrized(sigma);
  double jitter = 1e-9 * sigma.trace() / static_cast<double>(d);
  if (!(jitter > 0.0) || !std::isfinite(jitter)) jitter = 1e-12;
  sigma += jitter * Eigen::MatrixXd::Identity(d, d);
  for (int attempt = 0; attempt < 80; ++attempt) {
    try {
      return TComponent(alpha, mu, sigma, nu);
    } catch (const NonSpdError&) {
      sigma += jitter * Eigen::MatrixXd::Identity(d, d);
      jitter *= 10.0;
    }
  }
  throw NonSpdError("make_component_regularized: could not repair scale matrix");
}

}  // namespace detail

inline Eigen::VectorXd log_pdf_rows(const TMixture& mix, const Eigen::MatrixXd& pts) {
  const Eigen::Index n = pts.rows();
  const std::size_t m = mix.size();
  Eigen::MatrixXd terms(n, static_cast<Eigen::Index>(m));
  Eigen::VectorXd maha, lp;
  for (std::size_t j = 0; j < m; ++j) {
    detail::component_stats(mix.components[j], pts, maha, lp);
    terms.col(static_cast<Eigen::Index>(j)) = lp.array() + std::log(mix.components[j].alpha);
  }
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = terms.row(i).maxCoeff();
    out[i] = mx + std::log((terms.row(i).array() - mx).exp().sum());
  }
  return out;
}

inline double log_pdf(const TMixture& mix, const Eigen::VectorXd& x) {
  Eigen::MatrixXd pts = x.transpose();
  return log_pdf_rows(mix, pts)[0];
}

inline Eigen::MatrixXd sample_component(const TComponent& c, Eigen::Index n, RngStream& rng) {
  const Eigen::Index d = c.dim();
  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
    const double g = rng.chi_squared(c.nu);
    out.row(i) = (c.mu + c.chol * z * std::sqrt(c.nu / g)).transpose();
  }
  return out;
}

// n i.i.d. draws from the mixture, one per row. Deterministic given the
// stream: each draw consumes one uniform for component selection, then the
// component's normal/chi-square variates.
inline Eigen::MatrixXd sample(const TMixture& mix, Eigen::Index n, RngStream& rng) {
  if (n < 0) throw std::invalid_argument("sample: n must be nonnegative");
  const Eigen::Index d = mix.dim();
  Eigen::VectorXd cum(static_cast<Eigen::Index>(mix.size()));
  double acc = 0.0;
  for (std::size_t j = 0; j < mix.size(); ++j) {
    acc += mix.components[j].alpha;
    cum[static_cast<Eigen::Index>(j)] = acc;
  }
  Eigen::MatrixXd out(n, d);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const TComponent& c = mix.components[static_cast<std::size_t>(
        categorical_from_cumulative(cum, rng.uniform01()))];
    for (Eigen::Index j = 0; j < d; ++j) z[j] = rng.normal();
    const double g = rng.chi_squared(c.nu);
    out.row(i) = (c.mu + c.chol * z * std::sqrt(c.nu / g)).transpose();
  }
  return out;
}

// One weighted-EM step for the t-mixture. M and nu are unchanged. The scale
// update accumulates scatter around the pre-update mean and normalizes by the
// responsibility mass alone (set sigma_include_u for the variant that keeps
// u_m in the denominator). Components whose responsibility mass falls below
// 1e-12 are left untouched; masses are renormalized at the end.
inline TMixture em_update(const TMixture& mix, const WeightedSamples& samples,
                          bool sigma_include_u = false) {
  const Eigen::Index n = samples.size();
  const Eigen::Index d = samples.dim();
  const std::size_t m = mix.size();
  if (n < d + 1)
    throw std::invalid_argument("em_update: need at least d+1 samples");
  if (d != mix.dim())
    throw std::invalid_argument("em_update: sample dimension mismatch");

  Eigen::MatrixXd maha(n, static_cast<Eigen::Index>(m));
  Eigen::MatrixXd log_terms(n, static_cast<Eigen::Index>(m));
  Eigen::VectorXd mh, lp;
  for (std::size_t j = 0; j < m; ++j) {
    detail::component_stats(mix.components[j], samples.points, mh, lp);
    maha.col(static_cast<Eigen::Index>(j)) = mh;
    log_terms.col(static_cast<Eigen::Index>(j)) =
        lp.array() + std::log(mix.components[j].alpha);
  }
  // responsibilities; log_q is the row-wise log-sum-exp
  Eigen::MatrixXd eps(n, static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mx = log_terms.row(i).maxCoeff();
    const double lse = mx + std::log((log_terms.row(i).array() - mx).exp().sum());
    eps.row(i) = (log_terms.row(i).array() - lse).exp();
  }

  const double nu = mix.nu();
  TMixture out;
  out.components.reserve(m);
  std::vector<double> alphas(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto jc = static_cast<Eigen::Index>(j);
    const TComponent& c = mix.components[j];
    const Eigen::VectorXd we = samples.w.array() * eps.col(jc).array();
    const double mass = we.sum();
    if (mass < 1e-12) {  // starved component, untouched until prune removes it
      out.components.push_back(c);
      alphas[j] = c.alpha;
      continue;
    }
    const Eigen::VectorXd u =
        (nu + static_cast<double>(d)) / (nu + maha.col(jc).array());
    const Eigen::VectorXd weu = we.array() * u.array();
    const double mass_u = weu.sum();
    const Eigen::VectorXd mu_new = (samples.points.transpose() * weu) / mass_u;
    Eigen::MatrixXd diff = samples.points.rowwise() - c.mu.transpose();
    Eigen::MatrixXd scatter = diff.transpose() * weu.asDiagonal() * diff;
    const double denom = sigma_include_u ? mass_u : mass;
    out.components.push_back(
        detail::make_component_regularized(mass, mu_new, scatter / denom, nu));
    alphas[j] = mass;
  }
  double total = 0.0;
  for (double a : alphas) total += a;
  for (std::size_t j = 0; j < m; ++j) out.components[j].alpha = alphas[j] / total;
  return out;
}

// Adds a component centered at `center` with mass 0.1 and a diagonal scale of
// (width/20)^2 per axis; existing masses are rescaled by 0.9.
inline TMixture add_component(const TMixture& mix, const Eigen::VectorXd& center,
                              const Bounds& bounds) {
  if (!in_bounds(bounds, center))
    throw std::invalid_argument("add_component: center must lie inside bounds");
  const Eigen::Index d = mix.dim();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double s = (bounds.upper[j] - bounds.lower[j]) / 20.0;
    sigma(j, j) = s * s;
  }
  TMixture out = mix;
  for (TComponent& c : out.components) c.alpha *= 0.9;
  out.components.emplace_back(0.1, center, sigma, mix.nu());
  return out;
}

// Removes components below alpha_min and renormalizes survivors
// proportionally. If everything falls below the threshold the single largest
// component survives with mass 1; a mixture is never emptied.
inline TMixture prune(const TMixture& mix, double alpha_min) {
  TMixture out;
  for (const TComponent& c : mix.components)
    if (c.alpha >= alpha_min) out.components.push_back(c);
  if (out.components.empty()) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < mix.size(); ++j)
      if (mix.components[j].alpha > mix.components[best].alpha) best = j;
    out.components.push_back(mix.components[best]);
  }
  double total = 0.0;
  for (const TComponent& c : out.components) total += c.alpha;
  for (TComponent& c : out.components) c.alpha /= total;
  return out;
}

inline nlohmann::json mixture_to_json(const TMixture& mix, int iteration) {
  nlohmann::json comps = nlohmann::json::array();
  for (const TComponent& c : mix.components) {
    nlohmann::json jc;
    jc["alpha"] = c.alpha;
    jc["mu"] = std::vector<double>(c.mu.data(), c.mu.data() + c.mu.size());
    std::vector<double> sig;
    sig.reserve(static_cast<std::size_t>(c.sigma.size()));
    for (Eigen::Index r = 0; r < c.sigma.rows(); ++r)
      for (Eigen::Index col = 0; col < c.sigma.cols(); ++col) sig.push_back(c.sigma(r, col));
    jc["sigma"] = sig;
    jc["nu"] = c.nu;
    comps.push_back(jc);
  }
  return nlohmann::json{{"iteration", iteration}, {"components", comps}};
}

}  // namespace pesmc
