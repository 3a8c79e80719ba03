#pragma once

#include <limits>

#include <Eigen/Dense>

namespace pesmc {

// A weighted sample set: points live one per row, with cached objective and
// IS-density logs. w is the max-subtracted softmax of lambda*log_f - log_q
// for the lambda in force when the set was last weighted.
struct WeightedSamples {
  Eigen::MatrixXd points;  // N x d
  Eigen::VectorXd log_f;
  Eigen::VectorXd log_q;
  Eigen::VectorXd log_w;  // unnormalized: lambda*log_f - log_q
  Eigen::VectorXd w;      // normalized, sums to 1
  double lambda = std::numeric_limits<double>::quiet_NaN();

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

}  // namespace pesmc
