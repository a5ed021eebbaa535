#pragma once

#include <vector>

#include <Eigen/Dense>

namespace jpsn::linalg {

/// Symmetry tolerance used by every covariance input check.
inline constexpr double kSymmetryTol = 1e-10;

bool is_symmetric(const Eigen::MatrixXd& a, double tol = kSymmetryTol);
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a);

/// Lower Cholesky factor. On failure retries with diagonal jitter
/// 1e-12, 1e-11, ..., 1e-6 before throwing NumericalError.
Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a);

/// Cholesky without jitter; throws NumericalError if `a` is not positive definite.
Eigen::LLT<Eigen::MatrixXd> strict_llt(const Eigen::MatrixXd& a);

/// Inverse of a symmetric positive definite matrix, symmetrized.
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a);

double log_det_lower(const Eigen::MatrixXd& lower);

/// log N(x | mean, L L^T) given the lower factor L.
double mvn_log_density_lower(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& lower);

/// log N(x | mean, cov); throws NumericalError when cov is not positive definite.
double mvn_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& cov);

/// Rows and columns of `a` selected by `idx`.
Eigen::MatrixXd select(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::Index>& cols);
Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx);

}  // namespace jpsn::linalg
