#pragma once

#include <array>
#include <cstdint>
#include <compare>
#include <vector>

#include <Eigen/Core>

namespace heckelab {

/// Lipschitz quaternion a0 + a1 i + a2 j + a3 k with exact 64-bit coefficients.
/// Arithmetic is overflow-checked and throws ErrorKind::ArithmeticOverflow.
struct Quaternion {
  std::int64_t a0 = 0, a1 = 0, a2 = 0, a3 = 0;

  friend auto operator<=>(const Quaternion&, const Quaternion&) = default;

  Quaternion conjugate() const;
  Quaternion operator-() const;
  std::int64_t norm() const;
  bool is_zero() const noexcept { return a0 == 0 && a1 == 0 && a2 == 0 && a3 == 0; }
};

Quaternion multiply(const Quaternion& q, const Quaternion& r);
inline Quaternion operator*(const Quaternion& q, const Quaternion& r) { return multiply(q, r); }

/// R(n): norm n, a0 odd, a1..a3 even. Sorted lexicographically on (a0, a1, a2, a3).
std::vector<Quaternion> enumerate_Rn(std::int64_t n);

/// Unit quaternion in floating point; the SU(2) element u = q / sqrt(N(q)).
struct SU2Element {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static SU2Element from(const Quaternion& q);
  SU2Element operator*(const SU2Element& o) const;
  SU2Element inverse() const { return {w, -x, -y, -z}; }
};

using RotationMatrix = Eigen::Matrix3d;

/// Image of q / sqrt(N(q)) in SO(3) under v -> u v u^{-1}.
RotationMatrix rotation_of(const Quaternion& q);
RotationMatrix rotation_of(const SU2Element& u);

/// Unit quaternion with rotation_of(result) == R (sign chosen with w >= 0).
SU2Element su2_of(const RotationMatrix& R);

/// Throws ErrorKind::InvalidRotation unless R^T R = I and det R = 1 within tol.
void validate_rotation(const RotationMatrix& R, double tol = 1e-10);

/// Rotation angle in [0, pi] of the SO(3) image of q.
double rotation_angle(const Quaternion& q);

/// Quaternion algebra (a, b) over Q with omega^2 = a, Omega^2 = b, omega Omega = -Omega omega.
class IndefAlgebra {
 public:
  IndefAlgebra(std::int64_t a, std::int64_t b);

  std::int64_t a() const noexcept { return a_; }
  std::int64_t b() const noexcept { return b_; }

  friend bool operator==(const IndefAlgebra&, const IndefAlgebra&) = default;

 private:
  std::int64_t a_;
  std::int64_t b_;
};

bool is_squarefree(std::int64_t v);

/// x0 + x1 omega + x2 Omega + x3 Omega omega in the natural order Z<1, omega, Omega, Omega omega>.
/// The basis choice e3 = Omega omega makes theta_embed multiplicative.
struct OrderElement {
  IndefAlgebra algebra{2, 3};
  std::int64_t x0 = 0, x1 = 0, x2 = 0, x3 = 0;

  OrderElement conjugate() const;
  /// x0^2 - a x1^2 - b x2^2 + ab x3^2
  std::int64_t norm() const;
};

OrderElement multiply(const OrderElement& x, const OrderElement& y);

/// Embedding into M(2, R):
///   [[x0 - x1 sqrt(a), x2 + x3 sqrt(a)], [b (x2 - x3 sqrt(a)), x0 + x1 sqrt(a)]]
Eigen::Matrix2d theta_embed(const OrderElement& x);

}  // namespace heckelab
