#include "heckelab/quaternion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/LU>

#include "heckelab/checked.hpp"
#include "heckelab/error.hpp"

namespace heckelab {

using checked::add;
using checked::mul;
using checked::sub;

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ArithmeticOverflow: return "arithmetic-overflow";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::InvalidRotation: return "invalid-rotation";
    case ErrorKind::EmptyLevel: return "empty-level";
    case ErrorKind::NonSymmetric: return "non-symmetric";
    case ErrorKind::DegeneracyUnresolved: return "degeneracy-unresolved";
    case ErrorKind::OutOfRange: return "out-of-range";
    case ErrorKind::EnumerationBoundOverflow: return "enumeration-bound-overflow";
    case ErrorKind::UnderResolved: return "under-resolved";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::DegenerateProfile: return "degenerate-profile";
    case ErrorKind::Io: return "io";
    case ErrorKind::Usage: return "usage";
  }
  return "unknown";
}

Quaternion Quaternion::conjugate() const {
  return {a0, checked::neg(a1), checked::neg(a2), checked::neg(a3)};
}

Quaternion Quaternion::operator-() const {
  return {checked::neg(a0), checked::neg(a1), checked::neg(a2), checked::neg(a3)};
}

std::int64_t Quaternion::norm() const {
  return add(add(mul(a0, a0), mul(a1, a1)), add(mul(a2, a2), mul(a3, a3)));
}

Quaternion multiply(const Quaternion& q, const Quaternion& r) {
  // i^2 = j^2 = k^2 = -1, ij = k, jk = i, ki = j
  Quaternion p;
  p.a0 = sub(sub(mul(q.a0, r.a0), mul(q.a1, r.a1)), add(mul(q.a2, r.a2), mul(q.a3, r.a3)));
  p.a1 = add(add(mul(q.a0, r.a1), mul(q.a1, r.a0)), sub(mul(q.a2, r.a3), mul(q.a3, r.a2)));
  p.a2 = add(sub(mul(q.a0, r.a2), mul(q.a1, r.a3)), add(mul(q.a2, r.a0), mul(q.a3, r.a1)));
  p.a3 = add(add(mul(q.a0, r.a3), mul(q.a1, r.a2)), sub(mul(q.a3, r.a0), mul(q.a2, r.a1)));
  return p;
}

std::vector<Quaternion> enumerate_Rn(std::int64_t n) {
  std::vector<Quaternion> out;
  if (n < 1) throw Error(ErrorKind::OutOfRange, "enumerate_Rn requires n >= 1, got " + std::to_string(n));
  if (n % 4 != 1) return out;
  const std::int64_t s = checked::isqrt(n);
  for (std::int64_t a0 = -s; a0 <= s; ++a0) {
    if (a0 % 2 == 0) continue;
    const std::int64_t r0 = n - a0 * a0;
    const std::int64_t s1 = checked::isqrt(r0);
    for (std::int64_t a1 = -s1; a1 <= s1; ++a1) {
      if (a1 % 2 != 0) continue;
      const std::int64_t r1 = r0 - a1 * a1;
      const std::int64_t s2 = checked::isqrt(r1);
      for (std::int64_t a2 = -s2; a2 <= s2; ++a2) {
        if (a2 % 2 != 0) continue;
        const std::int64_t r2 = r1 - a2 * a2;
        const std::int64_t a3 = checked::isqrt(r2);
        if (a3 * a3 != r2 || a3 % 2 != 0) continue;
        out.push_back({a0, a1, a2, -a3});
        if (a3 != 0) out.push_back({a0, a1, a2, a3});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SU2Element SU2Element::from(const Quaternion& q) {
  if (q.is_zero()) throw Error(ErrorKind::DegenerateInput, "zero quaternion has no unit normalization");
  const double inv = 1.0 / std::sqrt(static_cast<double>(q.norm()));
  return {q.a0 * inv, q.a1 * inv, q.a2 * inv, q.a3 * inv};
}

SU2Element SU2Element::operator*(const SU2Element& o) const {
  return {w * o.w - x * o.x - y * o.y - z * o.z,
          w * o.x + x * o.w + y * o.z - z * o.y,
          w * o.y - x * o.z + y * o.w + z * o.x,
          w * o.z + x * o.y - y * o.x + z * o.w};
}

RotationMatrix rotation_of(const SU2Element& u) {
  const double w = u.w, x = u.x, y = u.y, z = u.z;
  RotationMatrix R;
  R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
       2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
       2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return R;
}

RotationMatrix rotation_of(const Quaternion& q) { return rotation_of(SU2Element::from(q)); }

void validate_rotation(const RotationMatrix& R, double tol) {
  const double orth = (R.transpose() * R - RotationMatrix::Identity()).cwiseAbs().maxCoeff();
  const double det = R.determinant();
  if (!(orth <= tol) || !(std::abs(det - 1.0) <= tol)) {
    throw Error(ErrorKind::InvalidRotation, "matrix is not a proper rotation (orthogonality defect " +
                                                std::to_string(orth) + ", det " + std::to_string(det) + ")");
  }
}

SU2Element su2_of(const RotationMatrix& R) {
  validate_rotation(R);
  // Shepperd: pick the largest diagonal combination for stability.
  const double t = R.trace();
  SU2Element u;
  if (t >= R(0, 0) && t >= R(1, 1) && t >= R(2, 2)) {
    const double s = std::sqrt(1.0 + t) * 2.0;
    u = {0.25 * s, (R(2, 1) - R(1, 2)) / s, (R(0, 2) - R(2, 0)) / s, (R(1, 0) - R(0, 1)) / s};
  } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
    const double s = std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2)) * 2.0;
    u = {(R(2, 1) - R(1, 2)) / s, 0.25 * s, (R(0, 1) + R(1, 0)) / s, (R(0, 2) + R(2, 0)) / s};
  } else if (R(1, 1) >= R(2, 2)) {
    const double s = std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2)) * 2.0;
    u = {(R(0, 2) - R(2, 0)) / s, (R(0, 1) + R(1, 0)) / s, 0.25 * s, (R(1, 2) + R(2, 1)) / s};
  } else {
    const double s = std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1)) * 2.0;
    u = {(R(1, 0) - R(0, 1)) / s, (R(0, 2) + R(2, 0)) / s, (R(1, 2) + R(2, 1)) / s, 0.25 * s};
  }
  if (u.w < 0) u = {-u.w, -u.x, -u.y, -u.z};
  const double nrm = std::sqrt(u.w * u.w + u.x * u.x + u.y * u.y + u.z * u.z);
  return {u.w / nrm, u.x / nrm, u.y / nrm, u.z / nrm};
}

double rotation_angle(const Quaternion& q) {
  if (q.is_zero()) throw Error(ErrorKind::DegenerateInput, "zero quaternion has no rotation");
  const double c = std::abs(static_cast<double>(q.a0)) / std::sqrt(static_cast<double>(q.norm()));
  return 2.0 * std::acos(std::min(1.0, c));
}

bool is_squarefree(std::int64_t v) {
  if (v == 0) return false;
  std::uint64_t m = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % (p * p) == 0) return false;
    if (m % p == 0) m /= p;
  }
  return true;
}

IndefAlgebra::IndefAlgebra(std::int64_t a, std::int64_t b) : a_(a), b_(b) {
  if (a <= 0 || !is_squarefree(a))
    throw Error(ErrorKind::OutOfRange, "algebra constant a must be positive and squarefree, got " + std::to_string(a));
  if (!is_squarefree(b))
    throw Error(ErrorKind::OutOfRange, "algebra constant b must be nonzero and squarefree, got " + std::to_string(b));
}

OrderElement OrderElement::conjugate() const {
  return {algebra, x0, checked::neg(x1), checked::neg(x2), checked::neg(x3)};
}

std::int64_t OrderElement::norm() const {
  const std::int64_t a = algebra.a(), b = algebra.b();
  std::int64_t v = mul(x0, x0);
  v = sub(v, mul(a, mul(x1, x1)));
  v = sub(v, mul(b, mul(x2, x2)));
  v = add(v, mul(mul(a, b), mul(x3, x3)));
  return v;
}

OrderElement multiply(const OrderElement& x, const OrderElement& y) {
  if (!(x.algebra == y.algebra)) throw Error(ErrorKind::DegenerateInput, "order elements from different algebras");
  const std::int64_t a = x.algebra.a(), b = x.algebra.b();
  OrderElement p{x.algebra};
  p.x0 = add(add(mul(x.x0, y.x0), mul(a, mul(x.x1, y.x1))),
             sub(mul(b, mul(x.x2, y.x2)), mul(mul(a, b), mul(x.x3, y.x3))));
  // e3 = Omega omega: e1 e2 = -e3, e1 e3 = -a e2, e2 e3 = b e1
  p.x1 = add(add(mul(x.x0, y.x1), mul(x.x1, y.x0)), sub(mul(b, mul(x.x2, y.x3)), mul(b, mul(x.x3, y.x2))));
  p.x2 = add(add(mul(x.x0, y.x2), mul(x.x2, y.x0)), sub(mul(a, mul(x.x3, y.x1)), mul(a, mul(x.x1, y.x3))));
  p.x3 = add(add(mul(x.x0, y.x3), mul(x.x3, y.x0)), sub(mul(x.x2, y.x1), mul(x.x1, y.x2)));
  return p;
}

Eigen::Matrix2d theta_embed(const OrderElement& x) {
  const double sa = std::sqrt(static_cast<double>(x.algebra.a()));
  const double b = static_cast<double>(x.algebra.b());
  Eigen::Matrix2d m;
  m << x.x0 - x.x1 * sa, x.x2 + x.x3 * sa,
       b * (x.x2 - x.x3 * sa), x.x0 + x.x1 * sa;
  return m;
}

}  // namespace heckelab
