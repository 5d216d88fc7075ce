#include "kbandit/exact_posterior.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "kbandit/linalg.hpp"

namespace kbandit {

ExactPosterior::ExactPosterior(KernelSpec kernel, double lambda)
    : kernel_(kernel), lambda_(lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("ExactPosterior: lambda must be positive");
  }
}

void ExactPosterior::grow_(long need_rows, long dim) {
  if (points_.rows() >= need_rows) return;
  long cap = points_.rows() == 0 ? 16 : points_.rows();
  while (cap < need_rows) cap *= 2;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(cap, dim);
  Eigen::VectorXd rw = Eigen::VectorXd::Zero(cap);
  Eigen::MatrixXd low = Eigen::MatrixXd::Zero(cap, cap);
  Eigen::VectorXd ly = Eigen::VectorXd::Zero(cap);
  if (n_ > 0) {
    pts.topRows(n_) = points_.topRows(n_);
    rw.head(n_) = rewards_.head(n_);
    low.topLeftCorner(n_, n_) = lower_.topLeftCorner(n_, n_);
    ly.head(n_) = linv_y_.head(n_);
  }
  points_ = std::move(pts);
  rewards_ = std::move(rw);
  lower_ = std::move(low);
  linv_y_ = std::move(ly);
}

void ExactPosterior::rebuild_() {
  Eigen::MatrixXd M = kernel_matrix(kernel_, points_.topRows(n_), points_.topRows(n_));
  M.diagonal().array() += lambda_;
  SymFactor fac = spd_factor(M, 0.0);
  jitter_ = fac.jitter;
  lower_.topLeftCorner(n_, n_) = fac.lower;
  linv_y_.head(n_) = fac.solve_lower(rewards_.head(n_));
  ++rebuilds_;
}

void ExactPosterior::append(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  if (n_ > 0 && x.size() != points_.cols()) {
    throw std::invalid_argument("ExactPosterior::append: dimension mismatch");
  }
  grow_(n_ + 1, x.size());
  const double diag = kernel_diag(kernel_, x) + lambda_ + jitter_;
  points_.row(n_) = x.transpose();
  rewards_(n_) = y;
  if (n_ == 0) {
    lower_(0, 0) = std::sqrt(diag);
    linv_y_(0) = y / lower_(0, 0);
    n_ = 1;
    return;
  }
  Eigen::VectorXd k = kernel_vector(kernel_, points_.topRows(n_), x);
  Eigen::VectorXd l12 = lower_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(k);
  const double d2 = diag - l12.squaredNorm();
  if (d2 > 1e-12 * diag) {
    lower_.row(n_).head(n_) = l12.transpose();
    lower_(n_, n_) = std::sqrt(d2);
    linv_y_(n_) = (y - l12.dot(linv_y_.head(n_))) / lower_(n_, n_);
    ++n_;
  } else {
    // Degenerate bordered pivot (near-duplicate arm): refactor outright.
    ++n_;
    rebuild_();
    std::cerr << "ExactPosterior: bordered update degenerated at n=" << n_
              << ", refactored with jitter " << jitter_ << "\n";
  }
}

MeanStd ExactPosterior::mean_std(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double kxx = kernel_diag(kernel_, x);
  if (n_ == 0) {
    return {0.0, std::sqrt(kxx / lambda_)};
  }
  if (x.size() != points_.cols()) {
    throw std::invalid_argument("ExactPosterior::mean_std: dimension mismatch");
  }
  Eigen::VectorXd k = kernel_vector(kernel_, points_.topRows(n_), x);
  Eigen::VectorXd w = lower_.topLeftCorner(n_, n_).triangularView<Eigen::Lower>().solve(k);
  const double mean = w.dot(linv_y_.head(n_));
  // Roundoff can push the quadratic form past k(x,x); clamp before the sqrt.
  const double var = std::max(0.0, kxx - w.squaredNorm()) / lambda_;
  return {mean, std::sqrt(var)};
}

double ExactPosterior::variance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double s = mean_std(x).std;
  return s * s;
}

double ExactPosterior::ucb(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha) const {
  const MeanStd ms = mean_std(x);
  return ms.mean + alpha * ms.std;
}

double ExactPosterior::regularized_logdet() const {
  if (n_ == 0) return 0.0;
  return 2.0 * lower_.topLeftCorner(n_, n_).diagonal().array().log().sum() -
         static_cast<double>(n_) * std::log(lambda_);
}

double theory_alpha_exact(double lambda, double theta_norm_bound, double noise_R, double delta,
                          long clients, double logdet) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("theory_alpha_exact: delta must be in (0,1)");
  }
  if (logdet < 0.0) {
    throw std::invalid_argument("theory_alpha_exact: logdet must be nonnegative");
  }
  return std::sqrt(lambda) * theta_norm_bound +
         noise_R * std::sqrt(4.0 * std::log(static_cast<double>(clients) / delta) + 2.0 * logdet);
}

}  // namespace kbandit
