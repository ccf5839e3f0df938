#pragma once

#include <exactpen/types.hpp>

#include <vector>

namespace exactpen {

/// Triangular factor of the stacked matrix [Aᵀ; √α·I_m] ((n+m) x m).
///
/// Since the stacked matrix has Gram matrix AAᵀ + αI, its R factor is a
/// Cholesky factor of AAᵀ + αI computed without forming the product.
struct StackedQR {
  Matrix A;
  double alpha = 0.0;
  Matrix R;  // m x m, upper triangular
  std::vector<bool> rank_flags;
  double drop_tolerance = 0.0;

  bool rank_deficient() const;
  Eigen::Index size() const { return R.rows(); }
};

/// Factorizes [Aᵀ; √α·I]. A diagonal entry of R is flagged when its
/// magnitude is at most ‖A‖_F · ε · max(m, n). Throws InputError on
/// non-finite A or negative α.
StackedQR stacked_qr(const Matrix& A, double alpha);

struct NormalSolve {
  Vector q;  // (RᵀR)⁻¹ rhs
  Vector p;  // R⁻ᵀ q, so that ‖p‖² = qᵀ(RᵀR)⁻¹q
};

/// Solves RᵀR q = rhs by two triangular solves and one extra solve for p.
/// Throws SingularFactorError when the factor carries rank flags.
NormalSolve solve_normal(const StackedQR& qr, const Vector& rhs);

/// (AAᵀ)⁻¹ rhs when A has full row rank; otherwise the solution of the
/// regularized system (AAᵀ + √ε·I) x = rhs, which approximates the
/// minimum-norm solution.
Vector solve_least_norm(const Matrix& A, const Vector& rhs);

}  // namespace exactpen
