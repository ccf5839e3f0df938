#include <exactpen/models.hpp>

#include <algorithm>
#include <cmath>

namespace exactpen {

ModelPoint evaluate_point(const CountedProblem& p, const Vector& x, double tau) {
  ModelPoint mp;
  mp.x = x;
  mp.f = p.f(x);
  mp.g = p.grad(x);
  mp.c = p.cons(x);
  mp.J = p.jac(x);
  mp.tau = tau;
  return mp;
}

double penalty_objective(const ModelPoint& mp) { return mp.f + mp.tau * mp.c.norm(); }

double model_value(const ModelPoint& mp, const Vector& s) {
  return mp.f + mp.g.dot(s) + mp.tau * (mp.c + mp.J * s).norm();
}

XiResult xi(const ModelPoint& mp, double sigma, const ProxSettings& settings) {
  if (!(sigma > 0.0)) {
    throw InputError("xi: sigma must be positive");
  }
  ProxQuery q;
  q.A = mp.J;
  q.b = mp.c;
  q.w = -mp.g / sigma;
  q.nu = 1.0 / sigma;
  q.tau = mp.tau;

  XiResult out;
  out.prox = prox_l2_linear(q, settings);
  out.step = out.prox.u;
  // f cancels; evaluate the decrease directly.
  double value = mp.tau * mp.c.norm() - mp.g.dot(out.step) - mp.tau * (mp.c + mp.J * out.step).norm();
  if (value < 0.0 && -value <= 1e-12 * (1.0 + std::abs(mp.f))) {
    value = 0.0;
  }
  out.value = value;
  out.statistic = std::sqrt(sigma * std::max(value, 0.0));
  return out;
}

ThetaResult theta_measure(const Vector& c, const Matrix& J, const ProxSettings& settings) {
  if (J.rows() != c.size()) {
    throw InputError("theta: Jacobian and constraint vector disagree");
  }
  ThetaResult out;
  if (c.size() == 0) {
    out.step = Vector::Zero(J.cols());
    return out;
  }
  ProxQuery q;
  q.A = J;
  q.b = c;
  q.w = Vector::Zero(J.cols());
  q.nu = 1.0;
  q.tau = 1.0;
  const ProxResult pr = prox_l2_linear(q, settings);
  out.step = pr.u;
  out.value = std::max(0.0, c.norm() - (c + J * pr.u).norm());
  return out;
}

double theta(const Vector& c, const Matrix& J) { return theta_measure(c, J).value; }

double model_error_diagnostic(const Problem& p, const Vector& x, const Vector& s, double tau) {
  const double snorm2 = s.squaredNorm();
  if (!(snorm2 > 0.0)) {
    throw InputError("model_error_diagnostic: step must be nonzero");
  }
  const Vector xs = x + s;
  const Vector c = p.eval_c(x);
  const Matrix J = p.jac(x);
  const double actual = p.eval_f(xs) + tau * p.eval_c(xs).norm();
  const double model = p.eval_f(x) + p.grad_f(x).dot(s) + tau * (c + J * s).norm();
  return std::abs(actual - model) / snorm2;
}

}  // namespace exactpen
