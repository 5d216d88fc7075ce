#include "kbandit/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace kbandit {

KernelSpec gaussian_kernel(double gamma) {
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("gaussian kernel requires gamma > 0");
  }
  return KernelSpec{KernelFamily::gaussian, gamma};
}

KernelSpec linear_kernel() { return KernelSpec{KernelFamily::linear, 0.0}; }

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  switch (spec.family) {
    case KernelFamily::gaussian:
      return std::exp(-spec.gamma * (x - y).squaredNorm());
    case KernelFamily::linear:
      return x.dot(y);
  }
  return 0.0;
}

double kernel_diag(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return spec.family == KernelFamily::gaussian ? 1.0 : x.squaredNorm();
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& A,
                              const Eigen::Ref<const Eigen::MatrixXd>& B) {
  if (A.cols() != B.cols()) {
    throw std::invalid_argument("kernel_matrix: feature dimension mismatch");
  }
  if (spec.family == KernelFamily::linear) {
    return A * B.transpose();
  }
  // |a-b|^2 = |a|^2 + |b|^2 - 2 a.b, evaluated blockwise.
  Eigen::VectorXd an = A.rowwise().squaredNorm();
  Eigen::VectorXd bn = B.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = (-2.0 * A * B.transpose());
  d2.colwise() += an;
  d2.rowwise() += bn.transpose();
  return (-spec.gamma * d2.cwiseMax(0.0)).array().exp();
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& A,
                              const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (A.cols() != x.size()) {
    throw std::invalid_argument("kernel_vector: feature dimension mismatch");
  }
  if (spec.family == KernelFamily::linear) {
    return A * x;
  }
  Eigen::VectorXd d2 =
      A.rowwise().squaredNorm().array() + x.squaredNorm() - 2.0 * (A * x).array();
  return (-spec.gamma * d2.cwiseMax(0.0)).array().exp();
}

}  // namespace kbandit
