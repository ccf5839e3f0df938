#pragma once

#include <exactpen/linalg.hpp>
#include <exactpen/quasi_newton.hpp>
#include <exactpen/types.hpp>

#include <cmath>
#include <vector>

namespace exactpen {

/// Proximal query for the composite ℓ2 term u ↦ τ‖Au + b‖₂:
///
///     minimize  ½ν⁻¹‖u − w‖² + ½ν⁻¹·ν_B·uᵀBu + τ‖Au + b‖₂
///
/// where the curvature term is present only when `curvature` is set.
/// With ν_B = ν this is the quadratic-model prox with Q = I + νB.
struct ProxQuery {
  Matrix A;
  Vector b;
  Vector w;
  double nu = 1.0;
  double tau = 1.0;
  const SymmetricOperator* curvature = nullptr;
  double nu_B = 0.0;
};

enum class ProxBranch { Interior, Boundary };

/// One Newton iterate of the secular equation φ(α) = 1/‖s(α)‖ − 1/(ντ).
struct SecularIterate {
  double alpha;
  double s_norm;
  double phi;
};

struct ProxResult {
  Vector u;
  Vector y;  // dual vector; ‖y‖ = ντ on the boundary branch
  double alpha_star = 0.0;
  int newton_iters = 0;
  ProxBranch branch = ProxBranch::Interior;
  std::vector<SecularIterate> trace;
};

struct SecularState {
  double alpha = 0.0;
  StackedQR qr;
  Vector s_alpha;
  Vector p;
  double phi = 0.0;
};

class SecularNonConvergence : public NonConvergenceError {
 public:
  SecularNonConvergence(const std::string& what, SecularState state)
      : NonConvergenceError(what), state_(std::move(state)) {}
  const SecularState& state() const { return state_; }

 private:
  SecularState state_;
};

struct ProxSettings {
  /// Safeguard factor applied when a Newton step leaves α ≤ 0.
  double theta = 0.8;
  int max_newton = 10000;
  /// Lower bound imposed on every Newton iterate.
  double alpha_floor = std::pow(kMachineEps, 0.75);
  /// Tolerance on |‖s(α)‖ − ντ|, scaled by min(1, ντ).
  double boundary_tol = std::pow(kMachineEps, 0.75);
  /// Stop after this many Newton steps without a smaller |‖s(α)‖ − ντ|,
  /// returning the best iterate.
  int stall_iters = 3;
  /// Tolerance on the consistency test ‖AAᵀs(0) + (Aw + b)‖ ≤ tol·(1 + ‖Aw + b‖).
  double consistency_tol = 1e-10;
  double krylov_tol = kMachineEps;
  int krylov_max_iter = 10000;
};

/// First-order prox (no curvature) via stacked QR factorizations and a
/// safeguarded Newton method on the secular equation.
ProxResult prox_l2_linear(const ProxQuery& q, const ProxSettings& settings = {});

/// Quadratic prox with Q = I + ν_B·B. Each trial α solves the saddle-point
/// system [−Q Aᵀ; A αI](u, y) = (−w, −b) with MINRES; the Newton ratio uses
/// a second solve with right-hand side (0, y). Throws
/// IndefiniteCurvatureError when Q is not positive definite.
ProxResult prox_l2_quadratic(const ProxQuery& q, const ProxSettings& settings = {});

/// Dispatches on the presence of curvature.
ProxResult prox_l2(const ProxQuery& q, const ProxSettings& settings = {});

/// Objective minimized by the prox, evaluated at u.
double prox_objective(const ProxQuery& q, const Vector& u);

}  // namespace exactpen
