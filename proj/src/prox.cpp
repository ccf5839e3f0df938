#include <exactpen/krylov.hpp>
#include <exactpen/prox.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace exactpen {
namespace {

void validate_query(const ProxQuery& q) {
  const auto m = q.A.rows();
  const auto n = q.A.cols();
  if (q.b.size() != m || q.w.size() != n) {
    throw InputError("prox: inconsistent query dimensions");
  }
  if (!all_finite(q.A) || !all_finite(q.b) || !all_finite(q.w)) {
    throw InputError("prox: non-finite query data");
  }
  if (!(q.nu > 0.0) || !(q.tau > 0.0) || !std::isfinite(q.nu) || !std::isfinite(q.tau)) {
    throw InputError("prox: nu and tau must be positive and finite");
  }
}

double boundary_gap(double s_norm, double radius) { return std::abs(s_norm - radius); }

// One safeguarded Newton update of α given φ/φ'.
double next_alpha(double alpha, double ratio, const ProxSettings& st) {
  double next = alpha - ratio;
  if (!(next > 0.0)) {
    next = st.theta * alpha;
  }
  return std::max(next, st.alpha_floor);
}

}  // namespace

double prox_objective(const ProxQuery& q, const Vector& u) {
  const Vector d = u - q.w;
  double quad = 0.5 * d.squaredNorm();
  if (q.curvature != nullptr) {
    quad += 0.5 * q.nu_B * u.dot(q.curvature->apply(u));
  }
  const double penalty = q.A.rows() > 0 ? q.tau * (q.A * u + q.b).norm() : 0.0;
  return quad / q.nu + penalty;
}

ProxResult prox_l2_linear(const ProxQuery& q, const ProxSettings& st) {
  validate_query(q);
  ProxResult out;
  const auto m = q.A.rows();
  if (m == 0) {
    out.u = q.w;
    out.y = Vector(0);
    return out;
  }

  const double radius = q.nu * q.tau;
  const Vector r = q.A * q.w + q.b;
  const Vector neg_r = -r;

  SecularState state;
  state.alpha = 0.0;
  state.qr = stacked_qr(q.A, 0.0);
  const bool full_rank = !state.qr.rank_deficient();

  // s(0) = −(AAᵀ)†(Aw + b), the regularized least-norm solve standing in for the pseudo-inverse.
  Vector s0;
  if (full_rank) {
    NormalSolve ns = solve_normal(state.qr, neg_r);
    s0 = ns.q;
    state.s_alpha = ns.q;
    state.p = ns.p;
  } else {
    s0 = solve_least_norm(q.A, neg_r);
  }
  const double consistency = (q.A * (q.A.transpose() * s0) + r).norm();
  if (s0.norm() <= radius && consistency <= st.consistency_tol * (1.0 + r.norm())) {
    out.y = s0;
    out.u = q.w + q.A.transpose() * s0;
    out.branch = ProxBranch::Interior;
    out.trace.push_back({0.0, s0.norm(), 1.0 / s0.norm() - 1.0 / radius});
    return out;
  }

  if (!full_rank) {
    state.alpha = std::sqrt(kMachineEps);
    state.qr = stacked_qr(q.A, state.alpha);
    NormalSolve ns = solve_normal(state.qr, neg_r);
    state.s_alpha = ns.q;
    state.p = ns.p;
  }

  const double tol = st.boundary_tol * std::min(1.0, radius);
  double best_gap = std::numeric_limits<double>::infinity();
  double best_alpha = state.alpha;
  Vector best_s;
  int no_progress = 0;
  while (true) {
    const double s_norm = state.s_alpha.norm();
    state.phi = 1.0 / s_norm - 1.0 / radius;
    out.trace.push_back({state.alpha, s_norm, state.phi});

    const double gap = boundary_gap(s_norm, radius);
    if (gap < best_gap) {
      best_gap = gap;
      best_alpha = state.alpha;
      best_s = state.s_alpha;
      no_progress = 0;
    } else if (++no_progress >= st.stall_iters) {
      // Round-off floor reached; keep the most accurate iterate.
      state.alpha = best_alpha;
      state.s_alpha = best_s;
      out.branch = best_s.norm() < radius ? ProxBranch::Interior : ProxBranch::Boundary;
      break;
    }
    if (gap <= tol) {
      out.branch = ProxBranch::Boundary;
      break;
    }
    if (s_norm < radius && state.alpha <= st.alpha_floor) {
      // The root lies below the floor: α* is numerically zero.
      out.branch = ProxBranch::Interior;
      break;
    }
    if (out.newton_iters >= st.max_newton) {
      std::ostringstream msg;
      msg << "prox_l2_linear: secular Newton did not converge in " << st.max_newton
          << " iterations (alpha = " << state.alpha << ", |s| = " << s_norm
          << ", radius = " << radius << ")";
      throw SecularNonConvergence(msg.str(), state);
    }

    // φ/φ' = (ντ − ‖s‖)‖s‖² / (ντ‖p‖²) with p = R⁻ᵀs, since sᵀ∇s(α) = −‖p‖².
    const double ratio = (radius - s_norm) * s_norm * s_norm / (radius * state.p.squaredNorm());
    const double alpha_next = next_alpha(state.alpha, ratio, st);
    ++out.newton_iters;
    if (alpha_next == state.alpha) {
      // No representable progress; the current iterate is as accurate as it gets.
      out.branch = s_norm < radius ? ProxBranch::Interior : ProxBranch::Boundary;
      break;
    }
    state.alpha = alpha_next;
    state.qr = stacked_qr(q.A, state.alpha);
    NormalSolve ns = solve_normal(state.qr, neg_r);
    state.s_alpha = std::move(ns.q);
    state.p = std::move(ns.p);
  }

  out.alpha_star = state.alpha;
  out.y = state.s_alpha;
  out.u = q.w + q.A.transpose() * state.s_alpha;
  return out;
}

namespace {

struct SaddleSolution {
  Vector u;
  Vector y;
  double rel_residual = 0.0;
  bool krylov_converged = false;
};

// Solves [−Q Aᵀ; A αI](u, y) = rhs with MINRES from a zero start.
SaddleSolution solve_saddle(const ProxQuery& q, double alpha, const Vector& rhs,
                            const ProxSettings& st) {
  const auto n = q.A.cols();
  const auto m = q.A.rows();
  const SymmetricOperator& B = *q.curvature;
  auto apply = [&](const Vector& z) {
    const auto u = z.head(n);
    const auto y = z.tail(m);
    Vector out(n + m);
    out.head(n) = -(u + q.nu_B * B.apply(u)) + q.A.transpose() * y;
    out.tail(m) = q.A * u + alpha * y;
    return out;
  };
  const KrylovResult kr = krylov_symmetric_solve(apply, rhs, st.krylov_tol, st.krylov_max_iter);
  SaddleSolution sol;
  sol.u = kr.solution.head(n);
  sol.y = kr.solution.tail(m);
  const double res = (apply(kr.solution) - rhs).norm();
  const double scale = rhs.norm() + kr.operator_norm_estimate * kr.solution.norm();
  sol.rel_residual = scale > 0.0 ? res / scale : res;
  sol.krylov_converged = kr.converged;
  return sol;
}

void require_accurate(const SaddleSolution& sol, double alpha) {
  if (sol.rel_residual > 1e-8) {
    std::ostringstream msg;
    msg << "prox_l2_quadratic: saddle-point solve failed at alpha = " << alpha
        << " (relative residual " << sol.rel_residual << ")";
    throw SolverError(msg.str());
  }
}

}  // namespace

ProxResult prox_l2_quadratic(const ProxQuery& q, const ProxSettings& st) {
  validate_query(q);
  if (q.curvature == nullptr) {
    return prox_l2_linear(q, st);
  }
  if (q.curvature->dim() != q.A.cols()) {
    throw InputError("prox_l2_quadratic: curvature operator has wrong dimension");
  }
  if (!(q.nu_B > 0.0)) {
    throw InputError("prox_l2_quadratic: nu_B must be positive");
  }
  const double q_min_eig = 1.0 + q.nu_B * q.curvature->min_eigenvalue();
  if (!(q_min_eig > 0.0)) {
    std::ostringstream msg;
    msg << "prox_l2_quadratic: I + nu_B*B is not positive definite (smallest eigenvalue "
        << q_min_eig << ")";
    throw IndefiniteCurvatureError(msg.str());
  }

  const auto n = q.A.cols();
  const auto m = q.A.rows();
  ProxResult out;
  auto check_probe = [&](const Vector& u) {
    const double uQu = u.squaredNorm() + q.nu_B * u.dot(q.curvature->apply(u));
    if (u.norm() > 0.0 && !(uQu > 0.0)) {
      throw IndefiniteCurvatureError("prox_l2_quadratic: negative curvature uᵀQu on the step");
    }
  };

  if (m == 0) {
    auto applyQ = [&](const Vector& u) -> Vector { return u + q.nu_B * q.curvature->apply(u); };
    const KrylovResult kr = krylov_symmetric_solve(applyQ, q.w, st.krylov_tol, st.krylov_max_iter);
    if (!kr.converged && (applyQ(kr.solution) - q.w).norm() > 1e-8 * (1.0 + q.w.norm())) {
      throw SolverError("prox_l2_quadratic: MINRES failed on Q u = w");
    }
    out.u = kr.solution;
    out.y = Vector(0);
    check_probe(out.u);
    return out;
  }

  const double radius = q.nu * q.tau;
  const double tol = st.boundary_tol * std::min(1.0, radius);
  Vector rhs(n + m);
  rhs << -q.w, -q.b;

  // α = 0 first: from a zero start MINRES returns the minimum-norm solution
  // when the system is consistent, i.e. y = −(AQ⁻¹Aᵀ)†v.
  double alpha = 0.0;
  SaddleSolution sol = solve_saddle(q, alpha, rhs, st);
  const bool full_rank = !stacked_qr(q.A, 0.0).rank_deficient();
  const bool consistent = sol.rel_residual <= st.consistency_tol;
  if (consistent && sol.y.norm() <= radius) {
    out.u = sol.u;
    out.y = sol.y;
    out.branch = ProxBranch::Interior;
    out.trace.push_back({0.0, sol.y.norm(), 1.0 / sol.y.norm() - 1.0 / radius});
    check_probe(out.u);
    return out;
  }
  if (!full_rank || !consistent) {
    alpha = std::sqrt(kMachineEps);
    sol = solve_saddle(q, alpha, rhs, st);
  }
  require_accurate(sol, alpha);

  double best_gap = std::numeric_limits<double>::infinity();
  double best_alpha = alpha;
  SaddleSolution best = sol;
  int no_progress = 0;
  while (true) {
    const double y_norm = sol.y.norm();
    out.trace.push_back({alpha, y_norm, 1.0 / y_norm - 1.0 / radius});
    const double gap = boundary_gap(y_norm, radius);
    if (gap < best_gap) {
      best_gap = gap;
      best_alpha = alpha;
      best = sol;
      no_progress = 0;
    } else if (++no_progress >= st.stall_iters) {
      alpha = best_alpha;
      sol = best;
      out.branch = sol.y.norm() < radius ? ProxBranch::Interior : ProxBranch::Boundary;
      break;
    }
    if (gap <= tol) {
      out.branch = ProxBranch::Boundary;
      break;
    }
    if (y_norm < radius && alpha <= st.alpha_floor) {
      out.branch = ProxBranch::Interior;
      break;
    }
    if (out.newton_iters >= st.max_newton) {
      throw NonConvergenceError("prox_l2_quadratic: secular Newton did not converge");
    }

    // φ_Q/φ_Q' = ‖y‖² / (yᵀ(AQ⁻¹Aᵀ + αI)⁻¹y) · (1 − ‖y‖/ντ); the inverse comes from
    // the second saddle-point solve with right-hand side (0, y).
    Vector rhs2 = Vector::Zero(n + m);
    rhs2.tail(m) = sol.y;
    const SaddleSolution aux = solve_saddle(q, alpha, rhs2, st);
    require_accurate(aux, alpha);
    const double denom = sol.y.dot(aux.y);
    const double ratio = y_norm * y_norm / denom * (1.0 - y_norm / radius);
    const double alpha_next = next_alpha(alpha, ratio, st);
    ++out.newton_iters;
    if (alpha_next == alpha) {
      out.branch = y_norm < radius ? ProxBranch::Interior : ProxBranch::Boundary;
      break;
    }
    alpha = alpha_next;
    sol = solve_saddle(q, alpha, rhs, st);
    require_accurate(sol, alpha);
  }

  out.alpha_star = alpha;
  out.u = sol.u;
  out.y = sol.y;
  check_probe(out.u);
  return out;
}

ProxResult prox_l2(const ProxQuery& q, const ProxSettings& settings) {
  return q.curvature != nullptr ? prox_l2_quadratic(q, settings) : prox_l2_linear(q, settings);
}

}  // namespace exactpen
