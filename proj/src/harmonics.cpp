#include "heckelab/harmonics.hpp"

#include <cmath>
#include <numbers>

#include "heckelab/error.hpp"

namespace heckelab {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

EulerZYZ euler_of(const SU2Element& u) {
  // u = (cos(b/2) cos s, sin(b/2) sin d, sin(b/2) cos d, cos(b/2) sin s), s = (alpha+gamma)/2, d = (gamma-alpha)/2
  const double s = std::atan2(u.z, u.w);
  const double d = std::atan2(u.x, u.y);
  const double beta = 2.0 * std::atan2(std::hypot(u.x, u.y), std::hypot(u.w, u.z));
  return {s - d, beta, s + d};
}

RotationMatrix rotation_of(const EulerZYZ& e) {
  auto rz = [](double t) {
    RotationMatrix r;
    r << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
    return r;
  };
  RotationMatrix ry;
  ry << std::cos(e.beta), 0, std::sin(e.beta), 0, 1, 0, -std::sin(e.beta), 0, std::cos(e.beta);
  return rz(e.alpha) * ry * rz(e.gamma);
}

std::vector<double> legendre_series(int kmax, double x) {
  std::vector<double> p(static_cast<std::size_t>(std::max(kmax, 0)) + 1, 1.0);
  if (kmax >= 1) p[1] = x;
  for (int l = 2; l <= kmax; ++l) p[l] = ((2.0 * l - 1.0) * x * p[l - 1] - (l - 1.0) * p[l - 2]) / l;
  return p;
}

NormalizedLegendre::NormalizedLegendre(int lmax, double c, double s)
    : lmax_(lmax), values_(index(lmax, lmax) + 1, 0.0) {
  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    values_[index(m, m)] = pmm;
    if (m + 1 > lmax) break;
    double prev = pmm;
    double cur = std::sqrt(2.0 * m + 3.0) * c * pmm;
    values_[index(m + 1, m)] = cur;
    for (int l = m + 2; l <= lmax; ++l) {
      const double l2 = static_cast<double>(l) * l, m2 = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
      const double lm1 = l - 1.0;
      const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
      const double next = a * (c * cur - b * prev);
      prev = cur;
      cur = next;
      values_[index(l, m)] = cur;
    }
  }
}

namespace {

void fill_real(int k, const NormalizedLegendre& P, double phi, double* out) {
  out[k] = P(k, 0);
  for (int m = 1; m <= k; ++m) {
    const double amp = std::numbers::sqrt2 * P(k, m);
    out[k + m] = amp * std::cos(m * phi);
    out[k - m] = amp * std::sin(m * phi);
  }
}

struct Polar {
  double c, s, phi;
};

Polar polar_of(const Vector3& x) {
  const double r = x.norm();
  const double rho = std::hypot(x.x(), x.y());
  return {x.z() / r, rho / r, rho > 0.0 ? std::atan2(x.y(), x.x()) : 0.0};
}

}  // namespace

Eigen::VectorXd real_harmonics(int k, const Vector3& x) {
  const Polar p = polar_of(x);
  const NormalizedLegendre P(k, p.c, p.s);
  Eigen::VectorXd y(2 * k + 1);
  fill_real(k, P, p.phi, y.data());
  return y;
}

std::vector<Eigen::VectorXd> real_harmonics_upto(int kmax, const Vector3& x) {
  const Polar p = polar_of(x);
  const NormalizedLegendre P(kmax, p.c, p.s);
  std::vector<Eigen::VectorXd> out;
  out.reserve(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    Eigen::VectorXd y(2 * k + 1);
    fill_real(k, P, p.phi, y.data());
    out.push_back(std::move(y));
  }
  return out;
}

Eigen::MatrixXcd real_basis_transform(int k) {
  using C = std::complex<double>;
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2 * k + 1, 2 * k + 1);
  U(k, k) = 1.0;
  for (int m = 1; m <= k; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    U(k + m, k + m) = sign * h;
    U(k + m, k - m) = h;
    U(k - m, k - m) = C(0.0, h);
    U(k - m, k + m) = C(0.0, -sign * h);
  }
  return U;
}

double wigner_d_seed(int m1, int m2, double cos_half, double sin_half) {
  const int j = std::max(std::abs(m1), std::abs(m2));
  const int s = std::max(0, m2 - m1);
  const int pc = 2 * j + m2 - m1 - 2 * s;
  const int ps = m1 - m2 + 2 * s;
  auto lf = [](int v) { return std::lgamma(v + 1.0); };
  const double log_coef = 0.5 * (lf(j + m1) + lf(j - m1) + lf(j + m2) + lf(j - m2)) -
                          (lf(j + m2 - s) + lf(s) + lf(m1 - m2 + s) + lf(j - m1 - s));
  double mag;
  if ((pc > 0 && cos_half == 0.0) || (ps > 0 && sin_half == 0.0)) {
    mag = 0.0;
  } else {
    double lg = log_coef;
    if (pc > 0) lg += pc * std::log(std::abs(cos_half));
    if (ps > 0) lg += ps * std::log(std::abs(sin_half));
    mag = std::exp(lg);
    if (pc % 2 != 0 && cos_half < 0) mag = -mag;
    if (ps % 2 != 0 && sin_half < 0) mag = -mag;
  }
  return ((m1 - m2 + s) % 2 == 0) ? mag : -mag;
}

WignerStep wigner_step(int j, int m1, int m2) {
  const double j1 = j + 1.0;
  const double mm1 = static_cast<double>(m1) * m1, mm2 = static_cast<double>(m2) * m2;
  const double a = j1 * (2.0 * j + 1.0) / std::sqrt((j1 * j1 - mm1) * (j1 * j1 - mm2));
  const double b = (m1 == 0 || m2 == 0) ? 0.0 : static_cast<double>(m1) * m2 / (static_cast<double>(j) * j1);
  const double jj = static_cast<double>(j) * j;
  const double c = j == 0 ? 0.0 : a * std::sqrt((jj - mm1) * (jj - mm2)) / (j * (2.0 * j + 1.0));
  return {a, b, c};
}

WignerSmallD::WignerSmallD(int jmax, double beta) : jmax_(jmax), blocks_(jmax + 1) {
  for (int j = 0; j <= jmax; ++j) blocks_[j].assign(static_cast<std::size_t>(2 * j + 1) * (2 * j + 1), 0.0);
  const double ch = std::cos(0.5 * beta), sh = std::sin(0.5 * beta), cb = std::cos(beta);
  for (int m1 = -jmax; m1 <= jmax; ++m1) {
    for (int m2 = -jmax; m2 <= jmax; ++m2) {
      const int l0 = std::max(std::abs(m1), std::abs(m2));
      double prev = 0.0;
      double cur = wigner_d_seed(m1, m2, ch, sh);
      for (int j = l0;; ++j) {
        blocks_[j][static_cast<std::size_t>(m1 + j) * (2 * j + 1) + (m2 + j)] = cur;
        if (j == jmax) break;
        const WignerStep st = wigner_step(j, m1, m2);
        const double next = st.a * (cb - st.b) * cur - st.c * prev;
        prev = cur;
        cur = next;
      }
    }
  }
}

double WignerSmallD::operator()(int j, int m1, int m2) const {
  if (std::abs(m1) > j || std::abs(m2) > j) return 0.0;
  return blocks_[j][static_cast<std::size_t>(m1 + j) * (2 * j + 1) + (m2 + j)];
}

Eigen::MatrixXcd wigner_D(int k, const EulerZYZ& e) {
  const WignerSmallD d(k, e.beta);
  Eigen::MatrixXcd D(2 * k + 1, 2 * k + 1);
  for (int m1 = -k; m1 <= k; ++m1)
    for (int m2 = -k; m2 <= k; ++m2)
      D(m1 + k, m2 + k) = d(k, m1, m2) * std::polar(1.0, -(m1 * e.alpha + m2 * e.gamma));
  return D;
}

Eigen::MatrixXd rotation_rep_matrix(int k, const SU2Element& u) {
  if (k < 0) throw Error(ErrorKind::OutOfRange, "harmonic degree must be non-negative");
  const Eigen::MatrixXcd D = wigner_D(k, euler_of(u));
  const Eigen::MatrixXcd U = real_basis_transform(k);
  return (U * D.conjugate() * U.adjoint()).real();
}

Eigen::MatrixXd rotation_rep_matrix(int k, const RotationMatrix& R) {
  validate_rotation(R);
  return rotation_rep_matrix(k, su2_of(R));
}

Vector3 unit_vector(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace heckelab
