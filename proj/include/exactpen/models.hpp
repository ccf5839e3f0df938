#pragma once

#include <exactpen/problem.hpp>
#include <exactpen/prox.hpp>
#include <exactpen/types.hpp>

namespace exactpen {

/// Problem data at a point x, evaluated once and shared by the models
///   φ(s; x)  = f(x) + ∇f(x)ᵀs
///   ψ_τ(s; x) = τ‖c(x) + J(x)s‖₂.
struct ModelPoint {
  Vector x;
  double f = 0.0;
  Vector g;
  Vector c;
  Matrix J;
  double tau = 1.0;
};

/// Evaluates f, ∇f, c and J at x through the counting wrapper.
ModelPoint evaluate_point(const CountedProblem& p, const Vector& x, double tau);

/// f(x) + τ‖c(x)‖₂.
double penalty_objective(const ModelPoint& mp);

/// (φ + ψ_τ)(s; x) = f + gᵀs + τ‖c + Js‖₂.
double model_value(const ModelPoint& mp, const Vector& s);

struct XiResult {
  double value = 0.0;      // ξ(x; σ, τ) = (f + τ‖c‖) − (φ + ψ_τ)(s_cp; x)
  double statistic = 0.0;  // √(σ·ξ)
  Vector step;             // Cauchy point s_cp
  ProxResult prox;
};

/// Cauchy point s_cp = prox_{σ⁻¹ψ_τ}(−σ⁻¹g) and the resulting model decrease.
/// Round-off negatives with |ξ| ≤ 1e-12·(1 + |f|) are clamped to zero.
XiResult xi(const ModelPoint& mp, double sigma, const ProxSettings& settings = {});

struct ThetaResult {
  double value = 0.0;  // θ(x) = ‖c‖ − ‖c + Js*‖
  Vector step;         // s* = prox_{ψ₁}(0)
};

/// Feasibility measure θ(x), i.e. ξ(x; 1, 1) with f ≡ 0. The outer loop
/// tests θ^{1/2}.
ThetaResult theta_measure(const Vector& c, const Matrix& J, const ProxSettings& settings = {});
double theta(const Vector& c, const Matrix& J);

/// Empirical model-accuracy constant
/// |f(x+s) + τ‖c(x+s)‖ − (φ + ψ_τ)(s; x)| / ‖s‖². Calls the raw callbacks.
double model_error_diagnostic(const Problem& p, const Vector& x, const Vector& s, double tau);

}  // namespace exactpen
