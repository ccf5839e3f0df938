#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace oracle {

DenseProx dense_prox(const Matrix& Q, const Matrix& A, const Vector& b, const Vector& w, double nu,
                     double tau) {
  const Eigen::LLT<Matrix> llt(Q);
  DenseProx out;
  if (A.rows() == 0) {
    out.u = llt.solve(w);
    out.y = Vector(0);
    out.interior = true;
    return out;
  }
  const Matrix QinvAt = llt.solve(A.transpose());
  const Matrix M = A * QinvAt;
  const Vector v = A * llt.solve(w) + b;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
  Vector lam = es.eigenvalues();
  const Matrix& V = es.eigenvectors();
  const Vector vt = V.transpose() * v;
  const double cut = 1e-9 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < cut) lam[i] = 0.0;
  }
  const double radius = nu * tau;

  auto y_of = [&](double alpha) {
    Vector z(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      const double d = lam[i] + alpha;
      z[i] = d > 0.0 ? -vt[i] / d : 0.0;
    }
    return Vector(V * z);
  };

  double null_part = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] == 0.0) null_part += vt[i] * vt[i];
  }
  const Vector y0 = y_of(0.0);
  if (std::sqrt(null_part) <= 1e-10 * (1.0 + v.norm()) && y0.norm() <= radius) {
    out.y = y0;
    out.interior = true;
  } else {
    double lo = 0.0;
    double hi = v.norm() / radius + 1.0;
    while (y_of(hi).norm() > radius) hi *= 2.0;
    for (int it = 0; it < 2000; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (y_of(mid).norm() > radius ? lo : hi) = mid;
    }
    out.alpha = 0.5 * (lo + hi);
    out.y = y_of(out.alpha);
  }
  out.u = llt.solve(w + A.transpose() * out.y);
  return out;
}

namespace {

double ball_objective(const Vector& g, const Vector& c, const Matrix& J, double tau,
                      const Vector& s) {
  return g.dot(s) + tau * (c + J * s).norm();
}

// argmin gᵀs + (λ/2)‖s‖² + τ‖c + Js‖.
Vector regularized_min(const Vector& g, const Vector& c, const Matrix& J, double tau, double lambda) {
  const auto n = g.size();
  return dense_prox(Matrix::Identity(n, n), J, c, -g / lambda, 1.0 / lambda, tau).u;
}

}  // namespace

BallMin ball_min(const Vector& g, const Vector& c, const Matrix& J, double tau) {
  BallMin out;
  // Ball multiplier zero: some y with Jᵀy = −g, ‖y‖ ≤ τ certifies the kink
  // point s₀ (Js₀ = −c, ‖s₀‖ ≤ 1) as optimal with value yᵀc.
  if (J.rows() > 0) {
    const Eigen::CompleteOrthogonalDecomposition<Matrix> jt(J.transpose());
    const Vector y = jt.solve(Vector(-g));
    const Eigen::CompleteOrthogonalDecomposition<Matrix> jj(J);
    const Vector s0 = jj.solve(Vector(-c));
    const bool dual_ok = (J.transpose() * y + g).norm() <= 1e-12 * (1.0 + g.norm()) && y.norm() <= tau;
    const bool primal_ok = (J * s0 + c).norm() <= 1e-12 * (1.0 + c.norm()) && s0.norm() <= 1.0;
    if (dual_ok && primal_ok) {
      out.s = s0;
      out.value = y.dot(c);
      return out;
    }
  }
  const double lambda_lo = 1e-12;
  Vector s = regularized_min(g, c, J, tau, lambda_lo);
  if (s.norm() > 1.0) {
    double lo = std::log(lambda_lo);
    double hi = 0.0;
    while (regularized_min(g, c, J, tau, std::exp(hi)).norm() > 1.0) hi += 1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (regularized_min(g, c, J, tau, std::exp(mid)).norm() > 1.0 ? lo : hi) = mid;
    }
    s = regularized_min(g, c, J, tau, std::exp(hi));
  }
  if (s.norm() > 1.0) s /= s.norm();
  out.s = s;
  out.value = ball_objective(g, c, J, tau, s);
  // s = 0 is feasible too.
  out.value = std::min(out.value, tau * c.norm());
  return out;
}

double ball_min_subgradient(const Vector& g, const Vector& c, const Matrix& J, double tau,
                            std::mt19937_64& rng, int starts, int iters) {
  const auto n = g.size();
  auto project = [](Vector s) {
    const double nrm = s.norm();
    return nrm > 1.0 ? Vector(s / nrm) : s;
  };
  double best = tau * c.norm();
  for (int start = 0; start <= starts; ++start) {
    Vector s = start == 0 ? Vector::Zero(n) : project(random_vector(rng, static_cast<int>(n)));
    for (int t = 0; t < iters; ++t) {
      const Vector r = c + J * s;
      const double rn = r.norm();
      best = std::min(best, g.dot(s) + tau * rn);
      Vector sub = g;
      if (rn > 0.0) sub += tau * J.transpose() * (r / rn);
      const double sn = sub.norm();
      if (sn == 0.0) break;
      s = project(s - (1.0 / std::sqrt(t + 1.0)) * sub / sn);
    }
    best = std::min(best, g.dot(s) + tau * (c + J * s).norm());
  }
  return best;
}

double xi_tr(const exactpen::ModelPoint& mp) {
  return mp.tau * mp.c.norm() - ball_min(mp.g, mp.c, mp.J, mp.tau).value;
}

double theta_tr(const Vector& c, const Matrix& J) {
  return c.norm() - ball_min(Vector::Zero(J.cols()), c, J, 1.0).value;
}

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Matrix A(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) A(i, j) = nd(rng);
  return A;
}

Vector random_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

Matrix random_rank_matrix(std::mt19937_64& rng, int rows, int cols, int r) {
  return random_matrix(rng, rows, r) * random_matrix(rng, r, cols);
}

Matrix random_symmetric(std::mt19937_64& rng, int n, double lo, double hi) {
  const Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, n));
  const Matrix U = qr.householderQ();
  std::uniform_real_distribution<double> ud(lo, hi);
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = ud(rng);
  return U * d.asDiagonal() * U.transpose();
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> ud(std::log(lo), std::log(hi));
  return std::exp(ud(rng));
}

}  // namespace oracle
