#pragma once

#include <Eigen/Core>

namespace kbandit {

enum class KernelFamily { gaussian, linear };

// k(x,y) = exp(-gamma * |x-y|^2) for the Gaussian family, x.y for the linear one.
struct KernelSpec {
  KernelFamily family = KernelFamily::gaussian;
  double gamma = 1.0;  // bandwidth; ignored by the linear kernel
};

KernelSpec gaussian_kernel(double gamma);
KernelSpec linear_kernel();

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

// k(x,x) without forming the pair.
double kernel_diag(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

// Entry (i,j) = k(A_i, B_j) over rows of A and B.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& A,
                              const Eigen::Ref<const Eigen::MatrixXd>& B);

// [k(A_i, x)]_i over rows of A.
Eigen::VectorXd kernel_vector(const KernelSpec& spec, const Eigen::Ref<const Eigen::MatrixXd>& A,
                              const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace kbandit
