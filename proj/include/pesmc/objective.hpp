#pragma once

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace pesmc {

// Raised when an objective returns NaN/inf; carries the offending point.
class ObjectiveError : public std::runtime_error {
 public:
  ObjectiveError(std::string msg, Eigen::VectorXd x)
      : std::runtime_error(std::move(msg)), point(std::move(x)) {}
  Eigen::VectorXd point;
};

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Bounds() = default;
  Bounds(Eigen::VectorXd lo, Eigen::VectorXd hi)
      : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size() || lower.size() < 1)
      throw std::invalid_argument("Bounds: lower/upper must have equal length >= 1");
    for (Eigen::Index j = 0; j < lower.size(); ++j)
      if (!(lower[j] < upper[j]))
        throw std::invalid_argument("Bounds: lower[j] < upper[j] required");
  }

  static Bounds cube(Eigen::Index dim, double lo, double hi) {
    return Bounds(Eigen::VectorXd::Constant(dim, lo), Eigen::VectorXd::Constant(dim, hi));
  }

  Eigen::Index dim() const { return lower.size(); }
  Eigen::VectorXd width() const { return upper - lower; }
  Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
};

inline bool in_bounds(const Bounds& bounds, const Eigen::VectorXd& x) {
  if (x.size() != bounds.dim())
    throw std::invalid_argument("in_bounds: dimension mismatch");
  for (Eigen::Index j = 0; j < x.size(); ++j)
    if (x[j] < bounds.lower[j] || x[j] > bounds.upper[j]) return false;
  return true;
}

// A bounded maximization problem. eval must be pure; the search operators
// only ever see it through log_f below, which floors the value so that
// f^lambda stays defined in the log domain.
struct ObjectiveSpec {
  Eigen::Index dim = 0;
  Bounds bounds;
  std::function<double(const Eigen::VectorXd&)> eval;
  double f_floor = 1e-300;

  void validate() const {
    if (dim < 1 || bounds.dim() != dim)
      throw std::invalid_argument("ObjectiveSpec: dim must match bounds");
    if (!eval) throw std::invalid_argument("ObjectiveSpec: eval not set");
    if (!(f_floor > 0.0)) throw std::invalid_argument("ObjectiveSpec: f_floor must be positive");
  }
};

// log of the floored objective. Out-of-bounds points are admissible but get
// log(f_floor), i.e. they are maximally de-weighted without being evaluated.
inline double log_f(const ObjectiveSpec& spec, const Eigen::VectorXd& x) {
  if (x.size() != spec.dim)
    throw std::invalid_argument("log_f: point dimension mismatch");
  if (!in_bounds(spec.bounds, x)) return std::log(spec.f_floor);
  const double v = spec.eval(x);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "log_f: objective returned non-finite value " << v;
    throw ObjectiveError(os.str(), x);
  }
  return std::log(std::max(v, spec.f_floor));
}

}  // namespace pesmc
