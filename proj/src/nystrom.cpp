#include "kbandit/nystrom.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "kbandit/linalg.hpp"

namespace kbandit {

namespace {
constexpr double kEigenFallbackJitter = 1e-6;
constexpr double kEigenvalueFloor = 1e-10;
}  // namespace

Dictionary::Dictionary(KernelSpec kernel, Eigen::MatrixXd features, std::vector<long> indices)
    : kernel_(kernel), features_(std::move(features)), indices_(std::move(indices)) {
  if (static_cast<long>(indices_.size()) != features_.rows()) {
    throw std::invalid_argument("Dictionary: indices/features size mismatch");
  }
  if (features_.rows() == 0) {
    return;
  }
  Eigen::MatrixXd kss = kernel_matrix(kernel_, features_, features_);
  SymFactor fac = spd_factor(kss, 0.0);
  jitter_ = fac.jitter;
  if (jitter_ > kEigenFallbackJitter) {
    use_eigen_ = true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kss);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(kEigenvalueFloor);
    whiten_ = ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  } else {
    lower_ = std::move(fac.lower);
  }
}

Eigen::VectorXd Dictionary::embed(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (size() == 0) {
    throw std::logic_error("Dictionary::embed: dictionary is empty");
  }
  Eigen::VectorXd ks = kernel_vector(kernel_, features_, x);
  if (use_eigen_) {
    return whiten_ * ks;
  }
  return lower_.triangularView<Eigen::Lower>().solve(ks);
}

Eigen::MatrixXd Dictionary::embed_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const {
  if (size() == 0) {
    throw std::logic_error("Dictionary::embed_rows: dictionary is empty");
  }
  Eigen::MatrixXd ks = kernel_matrix(kernel_, features_, rows);  // |S| x n
  if (use_eigen_) {
    return (whiten_ * ks).transpose();
  }
  return lower_.triangularView<Eigen::Lower>().solve(ks).transpose();
}

void EmbeddedStats::accumulate(const Eigen::Ref<const Eigen::VectorXd>& z, double y) {
  if (z.size() != dim()) {
    throw std::invalid_argument("EmbeddedStats::accumulate: dimension mismatch");
  }
  gram.noalias() += z * z.transpose();
  moment.noalias() += y * z;
  ++count;
}

EmbeddedStats& EmbeddedStats::operator+=(const EmbeddedStats& other) {
  if (other.dim() != dim()) {
    throw std::invalid_argument("EmbeddedStats: dimension mismatch in aggregation");
  }
  gram += other.gram;
  moment += other.moment;
  count += other.count;
  return *this;
}

ApproxScorer::ApproxScorer(std::shared_ptr<const Dictionary> dict, EmbeddedStats stats,
                           double lambda)
    : dict_(std::move(dict)), stats_(std::move(stats)), lambda_(lambda) {
  if (!dict_) {
    throw std::invalid_argument("ApproxScorer: dictionary must not be null");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("ApproxScorer: lambda must be positive");
  }
  if (has_dictionary()) {
    if (stats_.dim() == 0) {
      stats_ = EmbeddedStats(dict_->size());
    }
    if (stats_.dim() != dict_->size()) {
      throw std::invalid_argument("ApproxScorer: stats built against a different dictionary");
    }
    Eigen::MatrixXd M = stats_.gram;
    M.diagonal().array() += lambda_;
    lower_ = spd_factor(M, 0.0).lower;
    refresh_mean_coef_();
  }
}

void ApproxScorer::refresh_mean_coef_() {
  Eigen::VectorXd t = lower_.triangularView<Eigen::Lower>().solve(stats_.moment);
  ridge_mean_coef_ = lower_.transpose().triangularView<Eigen::Upper>().solve(t);
}

MeanStd ApproxScorer::mean_std(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double kxx = kernel_diag(dict_->kernel(), x);
  if (!has_dictionary()) {
    return {0.0, std::sqrt(kxx / lambda_)};
  }
  Eigen::VectorXd z = dict_->embed(x);
  const double mean = z.dot(ridge_mean_coef_);
  // z^T G (G+lI)^{-1} z = |z|^2 - l z^T (G+lI)^{-1} z keeps the variance
  // expression nonnegative without cancellation in the large-|z| regime, and
  // z^T (G+lI)^{-1} z is just |L^{-1} z|^2.
  Eigen::VectorXd w = lower_.triangularView<Eigen::Lower>().solve(z);
  const double var = std::max(0.0, kxx - z.squaredNorm()) / lambda_ + w.squaredNorm();
  return {mean, std::sqrt(std::max(0.0, var))};
}

double ApproxScorer::variance(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const double kxx = kernel_diag(dict_->kernel(), x);
  if (!has_dictionary()) {
    return kxx / lambda_;
  }
  Eigen::VectorXd z = dict_->embed(x);
  Eigen::VectorXd w = lower_.triangularView<Eigen::Lower>().solve(z);
  return std::max(0.0, std::max(0.0, kxx - z.squaredNorm()) / lambda_ + w.squaredNorm());
}

Eigen::VectorXd ApproxScorer::variances(const Eigen::Ref<const Eigen::MatrixXd>& rows) const {
  const long n = rows.rows();
  Eigen::VectorXd out(n);
  if (!has_dictionary()) {
    for (long i = 0; i < n; ++i) out(i) = kernel_diag(dict_->kernel(), rows.row(i)) / lambda_;
    return out;
  }
  Eigen::MatrixXd zt = dict_->embed_rows(rows).transpose();  // |S| x n
  Eigen::MatrixXd w = lower_.triangularView<Eigen::Lower>().solve(zt);
  for (long i = 0; i < n; ++i) {
    const double kxx = kernel_diag(dict_->kernel(), rows.row(i));
    out(i) = std::max(0.0, std::max(0.0, kxx - zt.col(i).squaredNorm()) / lambda_ +
                               w.col(i).squaredNorm());
  }
  return out;
}

void ApproxScorer::accumulate(const Eigen::Ref<const Eigen::VectorXd>& x, double y) {
  if (!has_dictionary()) {
    ++stats_.count;
    return;
  }
  Eigen::VectorXd z = dict_->embed(x);
  stats_.accumulate(z, y);
  chol_rank_one_update(lower_, z);
  refresh_mean_coef_();
}

double ApproxScorer::regularized_logdet() const {
  if (!has_dictionary()) return 0.0;
  return 2.0 * lower_.diagonal().array().log().sum() -
         static_cast<double>(dict_->size()) * std::log(lambda_);
}

MeanStd approx_mean_var(const std::shared_ptr<const Dictionary>& dict, const EmbeddedStats& stats,
                        double lambda, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return ApproxScorer(dict, stats, lambda).mean_std(x);
}

double theory_alpha_approx(double lambda, double theta_norm_bound, double noise_R, double delta,
                           long clients, double epsilon, double d_threshold, double gamma_bound) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("theory_alpha_approx: delta must be in (0,1)");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0 / 3.0)) {
    throw std::invalid_argument(
        "theory_alpha_approx: epsilon must lie in [0, 1/3) for the width to be defined");
  }
  const double ratio = (1.0 + epsilon) / (1.0 - epsilon);
  const double inner = -epsilon + 1.0 / (1.0 + ratio * d_threshold);
  if (!(inner > 0.0)) {
    throw std::invalid_argument(
        "theory_alpha_approx: -eps + 1/(1 + (1+eps)/(1-eps)*D) must be positive; "
        "lower epsilon or the threshold D");
  }
  return (1.0 / std::sqrt(inner) + 1.0) * std::sqrt(lambda) * theta_norm_bound +
         2.0 * noise_R * std::sqrt(std::log(static_cast<double>(clients) / delta) + gamma_bound);
}

double epsilon_accuracy(const Eigen::Ref<const Eigen::MatrixXd>& features,
                        const Eigen::Ref<const Eigen::VectorXd>& weights, double lambda) {
  if (features.rows() != weights.size()) {
    throw std::invalid_argument("epsilon_accuracy: weights/features size mismatch");
  }
  const long d = features.cols();
  Eigen::MatrixXd exact = features.transpose() * features;
  exact.diagonal().array() += lambda;
  Eigen::MatrixXd sampled = features.transpose() * weights.asDiagonal() * features;
  sampled.diagonal().array() += lambda;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sampled, exact,
                                                                Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  double eps = 0.0;
  for (long i = 0; i < d; ++i) {
    eps = std::max(eps, std::abs(ges.eigenvalues()(i) - 1.0));
  }
  return eps;
}

}  // namespace kbandit
