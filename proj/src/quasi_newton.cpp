#include <exactpen/quasi_newton.hpp>

#include <algorithm>
#include <cmath>

namespace exactpen {

DenseSymmetricOperator::DenseSymmetricOperator(Matrix B) : B_(std::move(B)) {
  if (B_.rows() != B_.cols()) {
    throw InputError("DenseSymmetricOperator: matrix must be square");
  }
  if (!all_finite(B_)) {
    throw InputError("DenseSymmetricOperator: matrix has non-finite entries");
  }
  if (B_.rows() == 0) {
    return;
  }
  const Matrix sym = 0.5 * (B_ + B_.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  min_eig_ = es.eigenvalues().minCoeff();
  norm_ = es.eigenvalues().cwiseAbs().maxCoeff();
}

QuasiNewtonOp::QuasiNewtonOp(QuasiNewtonKind kind, Eigen::Index n, int memory)
    : kind_(kind), n_(n), memory_(memory), U_(n, 0), signs_(0) {
  if (n <= 0 || memory <= 0) {
    throw InputError("QuasiNewtonOp: dimension and memory must be positive");
  }
}

Vector QuasiNewtonOp::apply(const Vector& v) const {
  if (v.size() != n_) {
    throw InputError("QuasiNewtonOp::apply: dimension mismatch");
  }
  if (U_.cols() == 0) {
    return v;
  }
  return v + U_ * signs_.cwiseProduct(U_.transpose() * v);
}

bool QuasiNewtonOp::update(const Vector& s, const Vector& y) {
  if (s.size() != n_ || y.size() != n_) {
    throw InputError("qn_update: dimension mismatch");
  }
  const double snorm = s.norm();
  if (!(snorm > 0.0) || !all_finite(y)) {
    return false;
  }
  if (kind_ == QuasiNewtonKind::LBFGS) {
    if (!(s.dot(y) > kSkipThreshold * snorm * y.norm())) {
      return false;
    }
  } else {
    const Vector r = y - apply(s);
    const double rnorm = r.norm();
    if (!(std::abs(s.dot(r)) > kSkipThreshold * snorm * rnorm)) {
      return false;
    }
  }
  pairs_.emplace_back(s, y);
  while (static_cast<int>(pairs_.size()) > memory_) {
    pairs_.pop_front();
  }
  rebuild();
  // An LSR1 pair can still be dropped when eviction changed the operator it is applied to.
  return !pairs_.empty() && pairs_.back().first.cwiseEqual(s).all() &&
         pairs_.back().second.cwiseEqual(y).all();
}

// Unrolls the recursive updates starting from B₀ = I:
//   BFGS: B ← B − (Bs)(Bs)ᵀ/(sᵀBs) + yyᵀ/(yᵀs)
//   SR1:  B ← B + rrᵀ/(rᵀs),  r = y − Bs
void QuasiNewtonOp::rebuild() {
  std::vector<Vector> cols;
  std::vector<double> sgn;
  auto current = [&](const Vector& v) {
    Vector out = v;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      out += sgn[i] * cols[i].dot(v) * cols[i];
    }
    return out;
  };

  std::deque<std::pair<Vector, Vector>> kept;
  for (const auto& [s, y] : pairs_) {
    if (kind_ == QuasiNewtonKind::LBFGS) {
      const Vector Bs = current(s);
      const double sBs = s.dot(Bs);
      const double sy = s.dot(y);
      if (!(sBs > 0.0) || !(sy > kSkipThreshold * s.norm() * y.norm())) {
        continue;
      }
      cols.push_back(Bs / std::sqrt(sBs));
      sgn.push_back(-1.0);
      cols.push_back(y / std::sqrt(sy));
      sgn.push_back(1.0);
    } else {
      const Vector r = y - current(s);
      const double rs = r.dot(s);
      if (!(std::abs(rs) > kSkipThreshold * s.norm() * r.norm())) {
        continue;
      }
      cols.push_back(r / std::sqrt(std::abs(rs)));
      sgn.push_back(rs > 0.0 ? 1.0 : -1.0);
    }
    kept.emplace_back(s, y);
  }
  pairs_ = std::move(kept);

  U_.resize(n_, static_cast<Eigen::Index>(cols.size()));
  signs_.resize(static_cast<Eigen::Index>(sgn.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    U_.col(static_cast<Eigen::Index>(i)) = cols[i];
    signs_[static_cast<Eigen::Index>(i)] = sgn[i];
  }
  refresh_spectrum();
}

// B = I + U D Uᵀ. With U = QR (thin), B acts as I + R D Rᵀ on range(Q) and
// as the identity on its orthogonal complement.
void QuasiNewtonOp::refresh_spectrum() {
  const Eigen::Index r = U_.cols();
  if (r == 0) {
    min_eig_ = 1.0;
    norm_ = 1.0;
    return;
  }
  Vector eigs;
  bool identity_block = false;
  if (r >= n_) {
    Matrix B = Matrix::Identity(n_, n_) + U_ * signs_.asDiagonal() * U_.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (B + B.transpose()), Eigen::EigenvaluesOnly);
    eigs = es.eigenvalues();
  } else {
    Eigen::HouseholderQR<Matrix> qr(U_);
    const Matrix R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    const Matrix small = R * signs_.asDiagonal() * R.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (small + small.transpose()),
                                             Eigen::EigenvaluesOnly);
    eigs = es.eigenvalues().array() + 1.0;
    identity_block = true;
  }
  min_eig_ = eigs.minCoeff();
  norm_ = eigs.cwiseAbs().maxCoeff();
  if (identity_block) {
    min_eig_ = std::min(min_eig_, 1.0);
    norm_ = std::max(norm_, 1.0);
  }
}

QuasiNewtonOp qn_update(QuasiNewtonOp op, const Vector& s, const Vector& y) {
  op.update(s, y);
  return op;
}

}  // namespace exactpen
