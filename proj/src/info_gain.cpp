#include "kbandit/info_gain.hpp"

#include <cmath>
#include <stdexcept>

#include "kbandit/linalg.hpp"

namespace kbandit {

double information_gain(const KernelSpec& spec, double lambda,
                        const Eigen::Ref<const Eigen::MatrixXd>& features) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("information_gain: lambda must be positive");
  }
  const long n = features.rows();
  if (n == 0) {
    return 0.0;
  }
  Eigen::MatrixXd M = kernel_matrix(spec, features, features) / lambda;
  M.diagonal().array() += 1.0;
  // I + K/lambda has eigenvalues >= 1, so no jitter is ever consumed here.
  return 0.5 * spd_factor(M, 0.0).log_det();
}

double logdet_ratio(const KernelSpec& spec, double lambda,
                    const Eigen::Ref<const Eigen::MatrixXd>& features_old,
                    const Eigen::Ref<const Eigen::MatrixXd>& features_new) {
  if (features_new.rows() == 0) {
    return 0.0;
  }
  if (features_old.rows() == 0) {
    return 2.0 * information_gain(spec, lambda, features_new);
  }
  Eigen::MatrixXd combined(features_old.rows() + features_new.rows(), features_old.cols());
  combined.topRows(features_old.rows()) = features_old;
  combined.bottomRows(features_new.rows()) = features_new;
  return 2.0 * (information_gain(spec, lambda, combined) -
                information_gain(spec, lambda, features_old));
}

InfoGainTracker::InfoGainTracker(KernelSpec spec, double lambda) : spec_(spec), lambda_(lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("InfoGainTracker: lambda must be positive");
  }
}

void InfoGainTracker::grow_(long need_rows, long dim) {
  if (points_.rows() >= need_rows) return;
  long cap = points_.rows() == 0 ? 16 : points_.rows();
  while (cap < need_rows) cap *= 2;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(cap, dim);
  Eigen::MatrixXd low = Eigen::MatrixXd::Zero(cap, cap);
  if (n_ > 0) {
    pts.topRows(n_) = points_.topRows(n_);
    low.topLeftCorner(n_, n_) = lower_.topLeftCorner(n_, n_);
  }
  points_ = std::move(pts);
  lower_ = std::move(low);
}

void InfoGainTracker::add(const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (n_ > 0 && x.size() != points_.cols()) {
    throw std::invalid_argument("InfoGainTracker: dimension mismatch");
  }
  grow_(n_ + 1, x.size());
  const double diag = 1.0 + kernel_diag(spec_, x) / lambda_;
  if (n_ == 0) {
    points_.row(0) = x.transpose();
    lower_(0, 0) = std::sqrt(diag);
  } else {
    Eigen::VectorXd k = kernel_vector(spec_, points_.topRows(n_), x) / lambda_;
    Eigen::VectorXd l12 =
        lower_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(k);
    // The Schur complement of a matrix >= I is >= 1; the sqrt cannot fail.
    const double d2 = diag - l12.squaredNorm();
    points_.row(n_) = x.transpose();
    lower_.row(n_).head(n_) = l12.transpose();
    lower_(n_, n_) = std::sqrt(d2);
  }
  logdet_ += 2.0 * std::log(lower_(n_, n_));
  ++n_;
}

}  // namespace kbandit
