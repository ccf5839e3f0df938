#pragma once

#include <exactpen/types.hpp>

#include <functional>

namespace exactpen {

using LinearMap = std::function<Vector(const Vector&)>;

enum class KrylovStop {
  RhsIsEigenvector,   // converged in one step
  ResidualSmall,      // ‖r‖ ≤ tol·‖M‖‖x‖
  LeastSquaresSmall,  // ‖Mr‖ ≤ tol·‖M‖‖r‖ (incompatible systems)
  SolutionStable,     // x has converged to machine precision
  IllConditioned,     // cond(M) estimate ≥ 0.1/ε
  MaxIterations,
  ZeroRhs,
};

struct KrylovResult {
  Vector solution;
  bool converged = false;
  int iterations = 0;
  KrylovStop stop = KrylovStop::MaxIterations;
  double residual_estimate = 0.0;
  double operator_norm_estimate = 0.0;
};

/// MINRES for symmetric, possibly indefinite or singular, M. Starting from
/// zero, iterates stay in the Krylov space of rhs, so a consistent singular
/// system yields its minimum-norm solution. On failure the last iterate is
/// returned with converged = false.
KrylovResult krylov_symmetric_solve(const LinearMap& apply, const Vector& rhs, double tol,
                                    int max_iter);

}  // namespace exactpen
