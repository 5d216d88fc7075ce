#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace kbandit {

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

// Lower-triangular Cholesky factor of M + jitter*I.
struct SymFactor {
  Eigen::MatrixXd lower;
  double jitter = 0.0;

  long dim() const { return lower.rows(); }

  // log det of the factored matrix, 2 * sum(log diag(L)).
  double log_det() const;

  // L x = b
  Eigen::VectorXd solve_lower(const Eigen::Ref<const Eigen::VectorXd>& b) const;
  // L L^T x = b
  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& b) const;
};

// Factor M + jitter*I, escalating the jitter geometrically (base, then 1e-10,
// x10 per retry, capped at 1e-4) until the factorization succeeds. Throws
// NumericalError carrying a min-eigenvalue estimate if the cap is reached.
SymFactor spd_factor(const Eigen::Ref<const Eigen::MatrixXd>& M, double base_jitter);

// In-place update of the lower factor so that L L^T gains + v v^T.
void chol_rank_one_update(Eigen::MatrixXd& L, Eigen::VectorXd v);

}  // namespace kbandit
