#include "jpsn/linalg.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "jpsn/errors.hpp"

namespace jpsn::linalg {

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw NumericalError("cholesky: matrix is not square");
  if (a.size() == 0) return a;
  if (!a.allFinite()) throw NumericalError("cholesky: matrix has non-finite entries");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  const Eigen::Index n = a.rows();
  for (double jitter = 1e-12; jitter <= 1e-6 * 1.0001; jitter *= 10.0) {
    llt.compute(a + jitter * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw NumericalError("cholesky: matrix is not positive definite after jitter escalation");
}

Eigen::LLT<Eigen::MatrixXd> strict_llt(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw NumericalError("matrix is not square");
  if (!a.allFinite()) throw NumericalError("matrix has non-finite entries");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalError("matrix is not positive definite");
  return llt;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a) {
  const Eigen::MatrixXd lower = cholesky_lower(a);
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd linv = lower.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n));
  return symmetrize(linv.transpose() * linv);
}

double log_det_lower(const Eigen::MatrixXd& lower) {
  return 2.0 * lower.diagonal().array().log().sum();
}

double mvn_log_density_lower(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                             const Eigen::MatrixXd& lower) {
  const Eigen::VectorXd z = lower.triangularView<Eigen::Lower>().solve(x - mean);
  const double n = static_cast<double>(x.size());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) + log_det_lower(lower) + z.squaredNorm());
}

double mvn_log_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                       const Eigen::MatrixXd& cov) {
  if (x.size() == 0) return 0.0;
  auto llt = strict_llt(cov);
  return mvn_log_density_lower(x, mean, llt.matrixL());
}

Eigen::MatrixXd select(const Eigen::MatrixXd& a, const std::vector<Eigen::Index>& rows,
                       const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

Eigen::VectorXd select(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

}  // namespace jpsn::linalg
