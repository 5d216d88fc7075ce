#include "kbandit/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

namespace kbandit {

double SymFactor::log_det() const {
  return 2.0 * lower.diagonal().array().log().sum();
}

Eigen::VectorXd SymFactor::solve_lower(const Eigen::Ref<const Eigen::VectorXd>& b) const {
  return lower.triangularView<Eigen::Lower>().solve(b);
}

Eigen::VectorXd SymFactor::solve(const Eigen::Ref<const Eigen::VectorXd>& b) const {
  Eigen::VectorXd y = lower.triangularView<Eigen::Lower>().solve(b);
  return lower.transpose().triangularView<Eigen::Upper>().solve(y);
}

namespace {
constexpr double kJitterFloor = 1e-10;
constexpr double kJitterCap = 1e-4;
}  // namespace

SymFactor spd_factor(const Eigen::Ref<const Eigen::MatrixXd>& M, double base_jitter) {
  if (M.rows() < 1 || M.rows() != M.cols()) {
    throw std::invalid_argument("spd_factor: matrix must be square with dimension >= 1");
  }
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + M.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("spd_factor: matrix is not symmetric");
  }
  if (base_jitter < 0.0) {
    throw std::invalid_argument("spd_factor: base_jitter must be nonnegative");
  }

  double jitter = base_jitter;
  while (true) {
    Eigen::MatrixXd shifted = M;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().minCoeff() > 0.0) {
      return SymFactor{Eigen::MatrixXd(llt.matrixL()), jitter};
    }
    if (jitter >= kJitterCap) {
      const double min_eig =
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly)
              .eigenvalues()
              .minCoeff();
      throw NumericalError("spd_factor: factorization failed at maximum jitter; "
                           "min eigenvalue approx " + std::to_string(min_eig),
                           min_eig);
    }
    jitter = jitter == 0.0 ? kJitterFloor : jitter * 10.0;
  }
}

void chol_rank_one_update(Eigen::MatrixXd& L, Eigen::VectorXd v) {
  const long n = L.rows();
  for (long k = 0; k < n; ++k) {
    const double lkk = L(k, k);
    const double r = std::hypot(lkk, v(k));
    const double c = r / lkk;
    const double s = v(k) / lkk;
    L(k, k) = r;
    const long m = n - k - 1;
    if (m > 0) {
      L.col(k).tail(m) = (L.col(k).tail(m) + s * v.tail(m)) / c;
      v.tail(m) = c * v.tail(m) - s * L.col(k).tail(m);
    }
  }
}

}  // namespace kbandit
