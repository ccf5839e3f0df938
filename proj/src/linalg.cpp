#include <exactpen/linalg.hpp>

#include <algorithm>
#include <cmath>

namespace exactpen {

bool StackedQR::rank_deficient() const {
  return std::any_of(rank_flags.begin(), rank_flags.end(), [](bool b) { return b; });
}

StackedQR stacked_qr(const Matrix& A, double alpha) {
  if (!all_finite(A)) {
    throw InputError("stacked_qr: matrix has non-finite entries");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw InputError("stacked_qr: alpha must be finite and non-negative");
  }
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();

  StackedQR out;
  out.A = A;
  out.alpha = alpha;
  out.drop_tolerance =
      A.norm() * kMachineEps * static_cast<double>(std::max<Eigen::Index>({m, n, 1}));

  Matrix stacked(n + m, m);
  stacked.topRows(n) = A.transpose();
  stacked.bottomRows(m) = std::sqrt(alpha) * Matrix::Identity(m, m);

  Eigen::HouseholderQR<Matrix> qr(stacked);
  out.R = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();

  out.rank_flags.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    out.rank_flags[static_cast<std::size_t>(i)] = std::abs(out.R(i, i)) <= out.drop_tolerance;
  }
  return out;
}

NormalSolve solve_normal(const StackedQR& qr, const Vector& rhs) {
  if (rhs.size() != qr.size()) {
    throw InputError("solve_normal: right-hand side has wrong length");
  }
  if (qr.rank_deficient()) {
    throw SingularFactorError("solve_normal: factor is rank deficient; regularize with alpha > 0");
  }
  const auto R = qr.R.triangularView<Eigen::Upper>();
  NormalSolve out;
  const Vector z = R.transpose().solve(rhs);
  out.q = R.solve(z);
  out.p = R.transpose().solve(out.q);
  return out;
}

Vector solve_least_norm(const Matrix& A, const Vector& rhs) {
  if (!all_finite(rhs)) {
    throw InputError("solve_least_norm: right-hand side has non-finite entries");
  }
  if (rhs.size() != A.rows()) {
    throw InputError("solve_least_norm: right-hand side has wrong length");
  }
  if (A.rows() == 0) {
    return Vector(0);
  }
  StackedQR qr = stacked_qr(A, 0.0);
  if (qr.rank_deficient()) {
    qr = stacked_qr(A, std::sqrt(kMachineEps));
  }
  return solve_normal(qr, rhs).q;
}

}  // namespace exactpen
