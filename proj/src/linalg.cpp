#include "timtin/linalg.hpp"

#include <cmath>

#include "timtin/error.hpp"

namespace timtin {

CVector SpanBasis::residual(const CVector& v) const {
  CVector r = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis_) r -= q * q.dot(r);
  }
  return r;
}

bool SpanBasis::try_add(const CVector& v, double tol) {
  if (basis_.size() >= dim_) return false;
  const double vn = v.norm();
  if (vn == 0.0) return false;
  CVector r = residual(v / vn);
  const double rn = r.norm();
  if (rn <= tol) return false;
  basis_.push_back(r / rn);
  return true;
}

std::optional<CVector> normalized(const CVector& v, double min_norm) {
  const double n = v.norm();
  if (!(n > min_norm) || !std::isfinite(n)) return std::nullopt;
  return CVector(v / n);
}

double log2_det_hpd(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::DimensionMismatch, "matrix is not positive definite");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    acc += 2.0 * std::log2(std::real(llt.matrixLLT()(i, i)));
  }
  return acc;
}

}  // namespace timtin
