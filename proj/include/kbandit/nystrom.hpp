#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "kbandit/exact_posterior.hpp"
#include "kbandit/kernel.hpp"

namespace kbandit {

// Immutable dictionary: a subset S of global time indices, its arm features,
// and the factorization of K_{S,S} backing the embedding z(x;S).
//
// z is realized as L^{-1} k_S(x) from the Cholesky factor L L^T = K_{S,S};
// any fixed invertible square root yields the same mean/variance since they
// depend on z only through Gram-type forms. When the factor needs jitter
// above 1e-6 the embedding falls back to an eigendecomposition with a 1e-10
// eigenvalue floor.
class Dictionary {
 public:
  Dictionary(KernelSpec kernel, Eigen::MatrixXd features, std::vector<long> indices);

  long size() const { return features_.rows(); }
  const Eigen::MatrixXd& features() const { return features_; }
  const std::vector<long>& indices() const { return indices_; }
  const KernelSpec& kernel() const { return kernel_; }
  double jitter() const { return jitter_; }
  bool eigen_fallback() const { return use_eigen_; }

  Eigen::VectorXd embed(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // Embeddings of many points at once; row i is z(rows_i; S).
  Eigen::MatrixXd embed_rows(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;

 private:
  KernelSpec kernel_;
  Eigen::MatrixXd features_;
  std::vector<long> indices_;
  Eigen::MatrixXd lower_;   // Cholesky path
  Eigen::MatrixXd whiten_;  // eigen path: Lambda^{-1/2} U^T
  double jitter_ = 0.0;
  bool use_eigen_ = false;
};

// The message payload of a synchronization: Z^T Z, Z^T y and the point count.
struct EmbeddedStats {
  Eigen::MatrixXd gram;
  Eigen::VectorXd moment;
  long count = 0;

  EmbeddedStats() = default;
  explicit EmbeddedStats(long dim)
      : gram(Eigen::MatrixXd::Zero(dim, dim)), moment(Eigen::VectorXd::Zero(dim)) {}

  long dim() const { return gram.rows(); }

  void accumulate(const Eigen::Ref<const Eigen::VectorXd>& z, double y);
  EmbeddedStats& operator+=(const EmbeddedStats& other);
};

// Scores queries against (dictionary, stats) with the factor of
// (Z^T Z + lambda I) cached; accumulate() keeps it fresh via a rank-one
// update instead of refactoring.
class ApproxScorer {
 public:
  ApproxScorer(std::shared_ptr<const Dictionary> dict, EmbeddedStats stats, double lambda);

  MeanStd mean_std(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double variance(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd variances(const Eigen::Ref<const Eigen::MatrixXd>& rows) const;

  void accumulate(const Eigen::Ref<const Eigen::VectorXd>& x, double y);

  const EmbeddedStats& stats() const { return stats_; }
  const std::shared_ptr<const Dictionary>& dictionary() const { return dict_; }
  bool has_dictionary() const { return dict_ && dict_->size() > 0; }

  // log det(I + Z^T Z / lambda), from the cached factor.
  double regularized_logdet() const;

 private:
  std::shared_ptr<const Dictionary> dict_;  // null or empty => prior scores
  EmbeddedStats stats_;
  double lambda_;
  Eigen::MatrixXd lower_;           // factor of gram + lambda I
  Eigen::VectorXd ridge_mean_coef_;  // (gram + lambda I)^{-1} moment

  void refresh_mean_coef_();
};

// mean = z^T (Z^T Z + lambda I)^{-1} Z^T y
// std  = sqrt(max(0, k(x,x) - z^T Z^T Z (Z^T Z + lambda I)^{-1} z) / lambda)
// Empty dictionary: mean 0, std sqrt(k(x,x)/lambda).
MeanStd approx_mean_var(const std::shared_ptr<const Dictionary>& dict, const EmbeddedStats& stats,
                        double lambda, const Eigen::Ref<const Eigen::VectorXd>& x);

// Lemma-style confidence width for the approximated estimator; throws if the
// epsilon/D combination makes the inner coefficient nonpositive.
double theory_alpha_approx(double lambda, double theta_norm_bound, double noise_R, double delta,
                           long clients, double epsilon, double d_threshold, double gamma_bound);

// Smallest eps with (1-eps)(Phi^T Phi + lambda I) <= Phi^T W Phi + lambda I
// <= (1+eps)(...), for explicit features and nonnegative per-row weights
// (1/p_s on sampled rows, 0 elsewhere). Test support, linear kernel only.
double epsilon_accuracy(const Eigen::Ref<const Eigen::MatrixXd>& features,
                        const Eigen::Ref<const Eigen::VectorXd>& weights, double lambda);

}  // namespace kbandit
