#pragma once

#include <Eigen/Core>

#include "kbandit/kernel.hpp"

namespace kbandit {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Dual-form kernel ridge posterior over an append-only data set. The Cholesky
// factor of K + lambda*I is extended one bordered row per append; a full
// refactorization (with jitter escalation) only happens when the bordered
// pivot degenerates.
class ExactPosterior {
 public:
  ExactPosterior(KernelSpec kernel, double lambda);

  void append(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

  // mean = k(x)^T (K + lambda I)^{-1} y
  // std  = sqrt(max(0, k(x,x) - k(x)^T (K + lambda I)^{-1} k(x)) / lambda)
  // Empty posterior: mean 0, std sqrt(k(x,x)/lambda).
  MeanStd mean_std(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double variance(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  double ucb(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha) const;

  // log det(I + K/lambda), from the maintained factor.
  double regularized_logdet() const;

  long count() const { return n_; }
  double lambda() const { return lambda_; }
  const KernelSpec& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }
  long rebuild_count() const { return rebuilds_; }

  Eigen::Ref<const Eigen::MatrixXd> points() const { return points_.topRows(n_); }
  Eigen::Ref<const Eigen::VectorXd> rewards() const { return rewards_.head(n_); }

 private:
  KernelSpec kernel_;
  double lambda_;
  Eigen::MatrixXd points_;
  Eigen::VectorXd rewards_;
  Eigen::MatrixXd lower_;   // factor of K + (lambda + jitter) I
  Eigen::VectorXd linv_y_;  // L^{-1} y, kept in lockstep with the factor
  double jitter_ = 0.0;
  long n_ = 0;
  long rebuilds_ = 0;

  void grow_(long need_rows, long dim);
  void rebuild_();
};

// sqrt(lambda)*theta_norm + R*sqrt(4 ln(N/delta) + 2*logdet)
double theory_alpha_exact(double lambda, double theta_norm_bound, double noise_R, double delta,
                          long clients, double logdet);

}  // namespace kbandit
