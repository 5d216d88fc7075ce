#pragma once

#include <Eigen/Core>

#include "kbandit/kernel.hpp"

namespace kbandit {

// log det(I + K_combined/lambda) - log det(I + K_old/lambda), where the
// combined set is the old rows followed by the new rows. Always >= 0.
double logdet_ratio(const KernelSpec& spec, double lambda,
                    const Eigen::Ref<const Eigen::MatrixXd>& features_old,
                    const Eigen::Ref<const Eigen::MatrixXd>& features_new);

// 0.5 * log det(I + K/lambda); zero for an empty feature set.
double information_gain(const KernelSpec& spec, double lambda,
                        const Eigen::Ref<const Eigen::MatrixXd>& features);

// Running log det(I + K/lambda) over an append-only point stream, maintained
// by bordered Cholesky updates so a horizon-length loop stays O(n^2) per step.
class InfoGainTracker {
 public:
  InfoGainTracker(KernelSpec spec, double lambda);

  void add(const Eigen::Ref<const Eigen::VectorXd>& x);

  double log_det() const { return logdet_; }
  double gain() const { return 0.5 * logdet_; }
  long count() const { return n_; }

 private:
  KernelSpec spec_;
  double lambda_;
  Eigen::MatrixXd points_;
  Eigen::MatrixXd lower_;  // factor of I + K/lambda over the first n_ points
  double logdet_ = 0.0;
  long n_ = 0;

  void grow_(long need_rows, long dim);
};

}  // namespace kbandit
