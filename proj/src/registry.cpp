#include <exactpen/registry.hpp>

#include <cmath>
#include <functional>
#include <sstream>

namespace exactpen {
namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) {
    v[i++] = x;
  }
  return v;
}

// Hock & Schittkowski, "Test Examples for Nonlinear Programming Codes" (1981).

Problem hs6() {
  Problem p;
  p.name = "hs6";
  p.n = 2;
  p.m = 1;
  p.x0 = vec({-1.2, 1.0});
  p.eval_f = [](const Vector& x) { return std::pow(1.0 - x[0], 2); };
  p.grad_f = [](const Vector& x) { return vec({-2.0 * (1.0 - x[0]), 0.0}); };
  p.eval_c = [](const Vector& x) { return vec({10.0 * (x[1] - x[0] * x[0])}); };
  p.jac = [](const Vector& x) {
    Matrix J(1, 2);
    J << -20.0 * x[0], 10.0;
    return J;
  };
  p.x_star = vec({1.0, 1.0});
  p.f_star = 0.0;
  return p;
}

Problem hs7() {
  Problem p;
  p.name = "hs7";
  p.n = 2;
  p.m = 1;
  p.x0 = vec({2.0, 2.0});
  p.eval_f = [](const Vector& x) { return std::log(1.0 + x[0] * x[0]) - x[1]; };
  p.grad_f = [](const Vector& x) { return vec({2.0 * x[0] / (1.0 + x[0] * x[0]), -1.0}); };
  p.eval_c = [](const Vector& x) {
    const double t = 1.0 + x[0] * x[0];
    return vec({t * t + x[1] * x[1] - 4.0});
  };
  p.jac = [](const Vector& x) {
    Matrix J(1, 2);
    J << 4.0 * x[0] * (1.0 + x[0] * x[0]), 2.0 * x[1];
    return J;
  };
  p.x_star = vec({0.0, std::sqrt(3.0)});
  p.f_star = -std::sqrt(3.0);
  return p;
}

Problem hs26() {
  Problem p;
  p.name = "hs26";
  p.n = 3;
  p.m = 1;
  p.x0 = vec({-2.6, 2.0, 2.0});
  p.eval_f = [](const Vector& x) {
    return std::pow(x[0] - x[1], 2) + std::pow(x[1] - x[2], 4);
  };
  p.grad_f = [](const Vector& x) {
    const double a = 2.0 * (x[0] - x[1]);
    const double b = 4.0 * std::pow(x[1] - x[2], 3);
    return vec({a, -a + b, -b});
  };
  p.eval_c = [](const Vector& x) {
    return vec({(1.0 + x[1] * x[1]) * x[0] + std::pow(x[2], 4) - 3.0});
  };
  p.jac = [](const Vector& x) {
    Matrix J(1, 3);
    J << 1.0 + x[1] * x[1], 2.0 * x[0] * x[1], 4.0 * std::pow(x[2], 3);
    return J;
  };
  p.x_star = vec({1.0, 1.0, 1.0});
  p.f_star = 0.0;
  return p;
}

Problem hs27() {
  Problem p;
  p.name = "hs27";
  p.n = 3;
  p.m = 1;
  p.x0 = vec({2.0, 2.0, 2.0});
  p.eval_f = [](const Vector& x) {
    return 0.01 * std::pow(x[0] - 1.0, 2) + std::pow(x[1] - x[0] * x[0], 2);
  };
  p.grad_f = [](const Vector& x) {
    const double r = x[1] - x[0] * x[0];
    return vec({0.02 * (x[0] - 1.0) - 4.0 * x[0] * r, 2.0 * r, 0.0});
  };
  p.eval_c = [](const Vector& x) { return vec({x[0] + x[2] * x[2] + 1.0}); };
  p.jac = [](const Vector& x) {
    Matrix J(1, 3);
    J << 1.0, 0.0, 2.0 * x[2];
    return J;
  };
  p.x_star = vec({-1.0, 1.0, 0.0});
  p.f_star = 0.04;
  return p;
}

Problem hs28() {
  Problem p;
  p.name = "hs28";
  p.n = 3;
  p.m = 1;
  p.x0 = vec({-4.0, 1.0, 1.0});
  p.eval_f = [](const Vector& x) {
    return std::pow(x[0] + x[1], 2) + std::pow(x[1] + x[2], 2);
  };
  p.grad_f = [](const Vector& x) {
    const double a = 2.0 * (x[0] + x[1]);
    const double b = 2.0 * (x[1] + x[2]);
    return vec({a, a + b, b});
  };
  p.eval_c = [](const Vector& x) { return vec({x[0] + 2.0 * x[1] + 3.0 * x[2] - 1.0}); };
  p.jac = [](const Vector&) {
    Matrix J(1, 3);
    J << 1.0, 2.0, 3.0;
    return J;
  };
  p.x_star = vec({0.5, -0.5, 0.5});
  p.f_star = 0.0;
  return p;
}

Problem hs39() {
  Problem p;
  p.name = "hs39";
  p.n = 4;
  p.m = 2;
  p.x0 = vec({2.0, 2.0, 2.0, 2.0});
  p.eval_f = [](const Vector& x) { return -x[0]; };
  p.grad_f = [](const Vector&) { return vec({-1.0, 0.0, 0.0, 0.0}); };
  p.eval_c = [](const Vector& x) {
    return vec({x[1] - std::pow(x[0], 3) - x[2] * x[2], x[0] * x[0] - x[1] - x[3] * x[3]});
  };
  p.jac = [](const Vector& x) {
    Matrix J(2, 4);
    J << -3.0 * x[0] * x[0], 1.0, -2.0 * x[2], 0.0,  //
        2.0 * x[0], -1.0, 0.0, -2.0 * x[3];
    return J;
  };
  p.x_star = vec({1.0, 1.0, 0.0, 0.0});
  p.f_star = -1.0;
  return p;
}

Problem hs40() {
  Problem p;
  p.name = "hs40";
  p.n = 4;
  p.m = 3;
  p.x0 = vec({0.8, 0.8, 0.8, 0.8});
  p.eval_f = [](const Vector& x) { return -x[0] * x[1] * x[2] * x[3]; };
  p.grad_f = [](const Vector& x) {
    return vec({-x[1] * x[2] * x[3], -x[0] * x[2] * x[3], -x[0] * x[1] * x[3], -x[0] * x[1] * x[2]});
  };
  p.eval_c = [](const Vector& x) {
    return vec({std::pow(x[0], 3) + x[1] * x[1] - 1.0, x[0] * x[0] * x[3] - x[2],
                x[3] * x[3] - x[1]});
  };
  p.jac = [](const Vector& x) {
    Matrix J(3, 4);
    J << 3.0 * x[0] * x[0], 2.0 * x[1], 0.0, 0.0,  //
        2.0 * x[0] * x[3], 0.0, -1.0, x[0] * x[0],   //
        0.0, -1.0, 0.0, 2.0 * x[3];
    return J;
  };
  p.x_star = vec({std::pow(2.0, -1.0 / 3.0), std::pow(2.0, -0.5), std::pow(2.0, -11.0 / 12.0),
                  std::pow(2.0, -0.25)});
  p.f_star = -0.25;
  return p;
}

Problem hs42() {
  Problem p;
  p.name = "hs42";
  p.n = 4;
  p.m = 2;
  p.x0 = vec({1.0, 1.0, 1.0, 1.0});
  p.eval_f = [](const Vector& x) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      s += std::pow(x[i] - (i + 1), 2);
    }
    return s;
  };
  p.grad_f = [](const Vector& x) {
    Vector g(4);
    for (int i = 0; i < 4; ++i) {
      g[i] = 2.0 * (x[i] - (i + 1));
    }
    return g;
  };
  p.eval_c = [](const Vector& x) { return vec({x[0] - 2.0, x[2] * x[2] + x[3] * x[3] - 2.0}); };
  p.jac = [](const Vector& x) {
    Matrix J(2, 4);
    J << 1.0, 0.0, 0.0, 0.0,  //
        0.0, 0.0, 2.0 * x[2], 2.0 * x[3];
    return J;
  };
  const double r2 = std::sqrt(2.0);
  p.x_star = vec({2.0, 2.0, 0.6 * r2, 0.8 * r2});
  p.f_star = 28.0 - 10.0 * r2;
  return p;
}

Problem hs48() {
  Problem p;
  p.name = "hs48";
  p.n = 5;
  p.m = 2;
  p.x0 = vec({3.0, 5.0, -3.0, 2.0, -2.0});
  p.eval_f = [](const Vector& x) {
    return std::pow(x[0] - 1.0, 2) + std::pow(x[1] - x[2], 2) + std::pow(x[3] - x[4], 2);
  };
  p.grad_f = [](const Vector& x) {
    const double a = 2.0 * (x[1] - x[2]);
    const double b = 2.0 * (x[3] - x[4]);
    return vec({2.0 * (x[0] - 1.0), a, -a, b, -b});
  };
  p.eval_c = [](const Vector& x) {
    return vec({x.sum() - 5.0, x[2] - 2.0 * (x[3] + x[4]) + 3.0});
  };
  p.jac = [](const Vector&) {
    Matrix J(2, 5);
    J << 1.0, 1.0, 1.0, 1.0, 1.0,  //
        0.0, 0.0, 1.0, -2.0, -2.0;
    return J;
  };
  p.x_star = Vector::Ones(5);
  p.f_star = 0.0;
  return p;
}

Problem hs78() {
  Problem p;
  p.name = "hs78";
  p.n = 5;
  p.m = 3;
  p.x0 = vec({-2.0, 1.5, 2.0, -1.0, -1.0});
  p.eval_f = [](const Vector& x) { return x.prod(); };
  p.grad_f = [](const Vector& x) {
    Vector g(5);
    for (int i = 0; i < 5; ++i) {
      double prod = 1.0;
      for (int k = 0; k < 5; ++k) {
        if (k != i) {
          prod *= x[k];
        }
      }
      g[i] = prod;
    }
    return g;
  };
  p.eval_c = [](const Vector& x) {
    return vec({x.squaredNorm() - 10.0, x[1] * x[2] - 5.0 * x[3] * x[4],
                std::pow(x[0], 3) + std::pow(x[1], 3) + 1.0});
  };
  p.jac = [](const Vector& x) {
    Matrix J = Matrix::Zero(3, 5);
    J.row(0) = 2.0 * x.transpose();
    J(1, 1) = x[2];
    J(1, 2) = x[1];
    J(1, 3) = -5.0 * x[4];
    J(1, 4) = -5.0 * x[3];
    J(2, 0) = 3.0 * x[0] * x[0];
    J(2, 1) = 3.0 * x[1] * x[1];
    return J;
  };
  p.x_star = vec({-1.717142, 1.595708, 1.827248, -0.7636429, -0.7636435});
  p.f_star = -2.91970041;
  return p;
}

Problem hs79() {
  Problem p;
  p.name = "hs79";
  p.n = 5;
  p.m = 3;
  p.x0 = vec({2.0, 2.0, 2.0, 2.0, 2.0});
  p.eval_f = [](const Vector& x) {
    return std::pow(x[0] - 1.0, 2) + std::pow(x[0] - x[1], 2) + std::pow(x[1] - x[2], 2) +
           std::pow(x[2] - x[3], 4) + std::pow(x[3] - x[4], 4);
  };
  p.grad_f = [](const Vector& x) {
    const double a = 2.0 * (x[0] - x[1]);
    const double b = 2.0 * (x[1] - x[2]);
    const double c = 4.0 * std::pow(x[2] - x[3], 3);
    const double d = 4.0 * std::pow(x[3] - x[4], 3);
    return vec({2.0 * (x[0] - 1.0) + a, -a + b, -b + c, -c + d, -d});
  };
  const double r2 = std::sqrt(2.0);
  p.eval_c = [r2](const Vector& x) {
    return vec({x[0] + x[1] * x[1] + std::pow(x[2], 3) - 2.0 - 3.0 * r2,
                x[1] - x[2] * x[2] + x[3] + 2.0 - 2.0 * r2, x[0] * x[4] - 2.0});
  };
  p.jac = [](const Vector& x) {
    Matrix J = Matrix::Zero(3, 5);
    J(0, 0) = 1.0;
    J(0, 1) = 2.0 * x[1];
    J(0, 2) = 3.0 * x[2] * x[2];
    J(1, 1) = 1.0;
    J(1, 2) = -2.0 * x[2];
    J(1, 3) = 1.0;
    J(2, 0) = x[4];
    J(2, 4) = x[0];
    return J;
  };
  p.x_star = vec({1.191127, 1.362603, 1.472818, 1.635017, 1.679081});
  p.f_star = 0.0787768209;
  return p;
}

// min ½‖x‖² s.t. x₁ = 1. Solution e₁ with multiplier 1 (∇f = Jᵀȳ).
Problem qp_known_multiplier() {
  QuadraticProgram qp;
  const int n = 5;
  qp.Q = Matrix::Identity(n, n);
  qp.g = Vector::Zero(n);
  qp.A = Matrix::Zero(1, n);
  qp.A(0, 0) = 1.0;
  qp.b = vec({-1.0});
  qp.x0 = vec({0.5, 1.0, -1.0, 0.5, 2.0});
  Problem p = make_qp_problem("qp-known-multiplier", std::move(qp));
  p.x_star = Vector::Unit(n, 0);
  p.f_star = 0.5;
  return p;
}

// Strictly convex QP with tridiagonal Hessian and five dense-ish linear constraints.
Problem lincon_quadratic() {
  const int n = 20;
  const int m = 5;
  QuadraticProgram qp;
  qp.Q = Matrix::Zero(n, n);
  qp.g.resize(n);
  for (int i = 0; i < n; ++i) {
    qp.Q(i, i) = 4.0;
    if (i + 1 < n) {
      qp.Q(i, i + 1) = -1.0;
      qp.Q(i + 1, i) = -1.0;
    }
    qp.g[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.1 * i);
  }
  qp.A = Matrix::Zero(m, n);
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) {
      if ((i + r) % (r + 2) == 0) {
        qp.A(r, i) = 1.0 + 0.25 * r;
      }
    }
    qp.A(r, (3 * r + 1) % n) -= 1.0;
  }
  qp.b = Vector::LinSpaced(m, -2.0, 2.0);
  qp.x0 = Vector::Zero(n);

  // Reference solution from the dense KKT system.
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = qp.Q;
  K.topRightCorner(n, m) = qp.A.transpose();
  K.bottomLeftCorner(m, n) = qp.A;
  Vector rhs(n + m);
  rhs << -qp.g, -qp.b;
  const Vector sol = K.fullPivLu().solve(rhs);
  const Vector xs = sol.head(n);
  const double fs = 0.5 * xs.dot(qp.Q * xs) + qp.g.dot(xs);

  Problem p = make_qp_problem("lincon-quadratic", std::move(qp));
  p.x_star = xs;
  p.f_star = fs;
  return p;
}

// Projection of (2, 1, 0) onto the unit sphere, with the sphere constraint
// listed twice so that the Jacobian has rank one everywhere.
Problem rank_deficient_dup() {
  Problem p;
  p.name = "rank-deficient-dup";
  p.n = 3;
  p.m = 2;
  p.x0 = vec({1.0, 1.0, 1.0});
  p.eval_f = [](const Vector& x) {
    return std::pow(x[0] - 2.0, 2) + std::pow(x[1] - 1.0, 2) + x[2] * x[2];
  };
  p.grad_f = [](const Vector& x) { return vec({2.0 * (x[0] - 2.0), 2.0 * (x[1] - 1.0), 2.0 * x[2]}); };
  p.eval_c = [](const Vector& x) {
    const double s = x.squaredNorm() - 1.0;
    return vec({s, s});
  };
  p.jac = [](const Vector& x) {
    Matrix J(2, 3);
    J.row(0) = 2.0 * x.transpose();
    J.row(1) = 2.0 * x.transpose();
    return J;
  };
  p.x_star = vec({2.0, 1.0, 0.0}) / std::sqrt(5.0);
  p.f_star = 6.0 - 2.0 * std::sqrt(5.0);
  return p;
}

// c(x) = x₁² + 1 has no real root; x = 0 is a critical point of the feasibility measure.
Problem infeasible_circle() {
  Problem p;
  p.name = "infeasible-circle";
  p.n = 2;
  p.m = 1;
  p.x0 = vec({1.0, 0.0});
  p.eval_f = [](const Vector&) { return 0.0; };
  p.grad_f = [](const Vector&) { return Vector::Zero(2); };
  p.eval_c = [](const Vector& x) { return vec({x[0] * x[0] + 1.0}); };
  p.jac = [](const Vector& x) {
    Matrix J(1, 2);
    J << 2.0 * x[0], 0.0;
    return J;
  };
  p.feasible = false;
  return p;
}

using Factory = std::function<Problem()>;

const std::vector<std::pair<std::string, Factory>>& factories() {
  static const std::vector<std::pair<std::string, Factory>> table = {
      {"qp-known-multiplier", qp_known_multiplier},
      {"lincon-quadratic", lincon_quadratic},
      {"hs6", hs6},
      {"hs7", hs7},
      {"hs26", hs26},
      {"hs27", hs27},
      {"hs28", hs28},
      {"hs39", hs39},
      {"hs40", hs40},
      {"hs42", hs42},
      {"hs48", hs48},
      {"hs78", hs78},
      {"hs79", hs79},
      {"rank-deficient-dup", rank_deficient_dup},
      {"infeasible-circle", infeasible_circle},
  };
  return table;
}

}  // namespace

std::vector<std::string> registry_names() {
  std::vector<std::string> names;
  for (const auto& [name, make] : factories()) {
    names.push_back(name);
  }
  return names;
}

Problem registry_get(const std::string& name) {
  for (const auto& [key, make] : factories()) {
    if (key == name) {
      return make();
    }
  }
  std::ostringstream msg;
  msg << "unknown problem '" << name << "'; available:";
  for (const auto& [key, make] : factories()) {
    msg << ' ' << key;
  }
  throw NotFoundError(msg.str());
}

}  // namespace exactpen
