#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "heckelab/quaternion.hpp"

namespace heckelab {

// Real spherical harmonics of degree k are indexed by m = -k..k at position m + k:
// m < 0 carries sin(|m| phi), m = 0 the zonal harmonic, m > 0 carries cos(m phi).
// Normalized to unit L2 norm against surface measure on S^2 (total mass 4 pi).

using Vector3 = Eigen::Vector3d;

/// ZYZ Euler angles: R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerZYZ {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

EulerZYZ euler_of(const SU2Element& u);
RotationMatrix rotation_of(const EulerZYZ& e);

/// P_0(x) .. P_kmax(x) by the upward three-term recurrence.
std::vector<double> legendre_series(int kmax, double x);

/// Fully normalized associated Legendre values sqrt((2l+1)/4pi (l-m)!/(l+m)!) P_l^m(cos theta)
/// (no Condon-Shortley phase), for 0 <= m <= l <= lmax. Flat layout, see index().
class NormalizedLegendre {
 public:
  NormalizedLegendre(int lmax, double cos_theta, double sin_theta);

  int lmax() const noexcept { return lmax_; }
  double operator()(int l, int m) const { return values_[index(l, m)]; }

  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; }

 private:
  int lmax_;
  std::vector<double> values_;
};

/// Real harmonic vector of degree k at a unit vector x (length 2k+1).
Eigen::VectorXd real_harmonics(int k, const Vector3& x);

/// Real harmonic vectors for every degree 0..kmax at x.
std::vector<Eigen::VectorXd> real_harmonics_upto(int kmax, const Vector3& x);

/// Unitary U with Y_real = U Y_complex (complex harmonics with Condon-Shortley phase),
/// rows and columns indexed by m + k.
Eigen::MatrixXcd real_basis_transform(int k);

/// Wigner small-d d^j_{m1,m2}(beta) for all j <= jmax, computed per (m1, m2) by the
/// three-term recurrence in j seeded at j = max(|m1|, |m2|).
class WignerSmallD {
 public:
  WignerSmallD(int jmax, double beta);

  int jmax() const noexcept { return jmax_; }
  double operator()(int j, int m1, int m2) const;

 private:
  int jmax_;
  std::vector<std::vector<double>> blocks_;  // per j, (2j+1)^2 row-major in (m1, m2)
};

/// d^j_{m1,m2}(beta) at the seed degree j = max(|m1|, |m2|), where the closed form has a single term.
double wigner_d_seed(int m1, int m2, double cos_half, double sin_half);

/// Recurrence coefficients for d^{j+1} = a (cos beta - b) d^j - c d^{j-1}.
struct WignerStep {
  double a, b, c;
};
WignerStep wigner_step(int j, int m1, int m2);

/// Complex Wigner D^j_{m1,m2}(R) = e^{-i m1 alpha} d^j_{m1,m2}(beta) e^{-i m2 gamma}.
Eigen::MatrixXcd wigner_D(int k, const EulerZYZ& e);

/// Matrix of (rho(R) f)(x) = f(R^{-1} x) on degree-k harmonics in the real basis.
/// Equivalently Y(R x) = rotation_rep_matrix(k, R) Y(x). Orthogonal, a homomorphism in R.
Eigen::MatrixXd rotation_rep_matrix(int k, const RotationMatrix& R);
Eigen::MatrixXd rotation_rep_matrix(int k, const SU2Element& u);

/// Unit vector with polar angle theta (from +z) and azimuth phi.
Vector3 unit_vector(double theta, double phi);

}  // namespace heckelab
