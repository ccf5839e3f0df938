#include <exactpen/problem.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace exactpen {

void CountedProblem::check_input(const Vector& x) const {
  if (x.size() != problem_->n) {
    throw ShapeError(problem_->name + ": expected point of length " + std::to_string(problem_->n) +
                     ", got " + std::to_string(x.size()));
  }
}

double CountedProblem::f(const Vector& x) const {
  check_input(x);
  ++counters_->n_f;
  return problem_->eval_f(x);
}

Vector CountedProblem::grad(const Vector& x) const {
  check_input(x);
  ++counters_->n_grad;
  Vector g = problem_->grad_f(x);
  if (g.size() != problem_->n) {
    throw ShapeError(problem_->name + ": gradient has length " + std::to_string(g.size()));
  }
  return g;
}

Vector CountedProblem::cons(const Vector& x) const {
  check_input(x);
  ++counters_->n_c;
  Vector c = problem_->eval_c(x);
  if (c.size() != problem_->m) {
    throw ShapeError(problem_->name + ": constraint vector has length " + std::to_string(c.size()));
  }
  return c;
}

Matrix CountedProblem::jac(const Vector& x) const {
  check_input(x);
  ++counters_->n_jac;
  Matrix J = problem_->jac(x);
  if (J.rows() != problem_->m || J.cols() != problem_->n) {
    throw ShapeError(problem_->name + ": Jacobian is " + std::to_string(J.rows()) + "x" +
                     std::to_string(J.cols()));
  }
  return J;
}

void validate_problem(const Problem& p) {
  if (p.n <= 0 || p.m < 0) {
    throw InputError(p.name + ": invalid dimensions");
  }
  if (p.x0.size() != p.n) {
    throw InputError(p.name + ": x0 has wrong length");
  }
  if (!p.eval_f || !p.grad_f || !p.eval_c || !p.jac) {
    throw InputError(p.name + ": missing callback");
  }
}

std::vector<DerivativeViolation> verify_derivatives(const Problem& p, const Vector& x, double tol) {
  if (x.size() != p.n) {
    throw ShapeError(p.name + ": verify_derivatives called with point of wrong length");
  }
  if (!(tol > 0.0)) {
    throw InputError("verify_derivatives: tolerance must be positive");
  }
  EvalCounters scratch;
  const CountedProblem cp(p, scratch);
  const Vector g = cp.grad(x);
  const Matrix J = cp.jac(x);

  const double base_step = std::cbrt(kMachineEps);
  std::vector<DerivativeViolation> out;
  auto record = [&](DerivativeKind kind, int row, int col, double a, double d) {
    const double rel = std::abs(a - d) / std::max({1.0, std::abs(a), std::abs(d)});
    if (rel > tol) {
      out.push_back({kind, row, col, a, d, rel});
    }
  };

  Vector xp = x;
  Vector xm = x;
  for (int i = 0; i < p.n; ++i) {
    const double h = base_step * (1.0 + std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double width = xp[i] - xm[i];
    const double dfd = (cp.f(xp) - cp.f(xm)) / width;
    record(DerivativeKind::Gradient, 0, i, g[i], dfd);
    if (p.m > 0) {
      const Vector dc = (cp.cons(xp) - cp.cons(xm)) / width;
      for (int r = 0; r < p.m; ++r) {
        record(DerivativeKind::Jacobian, r, i, J(r, i), dc[r]);
      }
    }
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return out;
}

Problem make_qp_problem(std::string name, QuadraticProgram qp) {
  const auto n = qp.Q.rows();
  const auto m = qp.A.rows();
  if (qp.Q.cols() != n || qp.g.size() != n || qp.x0.size() != n || qp.b.size() != m ||
      (m > 0 && qp.A.cols() != n)) {
    throw InputError(name + ": inconsistent QP dimensions");
  }
  if (!all_finite(qp.Q) || !all_finite(qp.g) || !all_finite(qp.A) || !all_finite(qp.b) ||
      !all_finite(qp.x0)) {
    throw InputError(name + ": QP data must be finite");
  }
  if (m == 0) {
    qp.A.resize(0, n);
  }
  // Only the symmetric part of Q contributes to the objective.
  const Matrix Qs = 0.5 * (qp.Q + qp.Q.transpose());

  Problem p;
  p.name = std::move(name);
  p.n = static_cast<int>(n);
  p.m = static_cast<int>(m);
  p.x0 = qp.x0;
  p.eval_f = [Qs, g = qp.g](const Vector& x) { return 0.5 * x.dot(Qs * x) + g.dot(x); };
  p.grad_f = [Qs, g = qp.g](const Vector& x) -> Vector { return Qs * x + g; };
  p.eval_c = [A = qp.A, b = qp.b](const Vector& x) -> Vector { return A * x + b; };
  p.jac = [A = qp.A](const Vector&) -> Matrix { return A; };
  return p;
}

namespace {

using nlohmann::json;

Vector vector_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError(std::string("QP JSON: missing array \"") + key + "\"");
  }
  const auto& arr = j.at(key);
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw InputError(std::string("QP JSON: non-numeric entry in \"") + key + "\"");
    }
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const json& j, const char* key, Eigen::Index cols_if_empty) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InputError(std::string("QP JSON: missing matrix \"") + key + "\"");
  }
  const auto& rows = j.at(key);
  if (rows.empty()) {
    return Matrix(0, cols_if_empty);
  }
  const auto ncols = rows[0].size();
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != ncols) {
      throw InputError(std::string("QP JSON: ragged matrix \"") + key + "\"");
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!rows[r][c].is_number()) {
        throw InputError(std::string("QP JSON: non-numeric entry in \"") + key + "\"");
      }
      M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
  }
  return M;
}

}  // namespace

QuadraticProgram parse_qp_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("QP JSON: ") + e.what());
  }
  QuadraticProgram qp;
  qp.x0 = vector_from_json(j, "x0");
  qp.g = vector_from_json(j, "g");
  qp.b = vector_from_json(j, "b");
  qp.Q = matrix_from_json(j, "Q", qp.x0.size());
  qp.A = matrix_from_json(j, "A", qp.x0.size());
  return qp;
}

QuadraticProgram load_qp_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open QP file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_qp_json(ss.str());
}

}  // namespace exactpen
