#include "heckelab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heckelab/error.hpp"
#include "heckelab/summation.hpp"

namespace heckelab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// rho(mu - mu_k) (2k+1) / 4 pi for k in the window range, zero elsewhere.
std::vector<double> degree_weights(double mu, const SpectralWindow& w, int& kmax) {
  const DegreeRange r = window_degrees(mu, w);
  kmax = r.kmax;
  std::vector<double> out(static_cast<std::size_t>(std::max(r.kmax, 0)) + 1, 0.0);
  for (int k = r.kmin; k <= r.kmax; ++k) out[k] = w(mu - spectral_parameter(k)) * (2.0 * k + 1.0) / kFourPi;
  return out;
}

double legendre_weighted(const std::vector<double>& weights, int kmax, double c) {
  if (kmax < 0) return 0.0;
  const std::vector<double> P = legendre_series(kmax, std::clamp(c, -1.0, 1.0));
  CompensatedSum s;
  for (int k = 0; k <= kmax; ++k)
    if (weights[k] != 0.0) s.add(weights[k] * P[k]);
  return s.value();
}

}  // namespace

double spectral_parameter(int k) { return std::sqrt(static_cast<double>(k) * (k + 1.0)); }

DegreeRange window_degrees(double mu, const SpectralWindow& w) {
  const double T = w.tail_cutoff();
  DegreeRange r;
  // mu_k is increasing; mu_k >= k and mu_k < k + 1/2
  r.kmin = std::max(0, static_cast<int>(std::floor(mu - T - 1.0)));
  while (r.kmin > 0 && spectral_parameter(r.kmin - 1) >= mu - T) --r.kmin;
  while (spectral_parameter(r.kmin) < mu - T) ++r.kmin;
  r.kmax = std::max(r.kmin - 1, static_cast<int>(std::floor(mu + T)) + 1);
  while (spectral_parameter(r.kmax) > mu + T) --r.kmax;
  while (spectral_parameter(r.kmax + 1) <= mu + T) ++r.kmax;
  return r;
}

Character Character::trivial() { return {}; }

double kernel_diag(double mu, const SpectralWindow& w) {
  if (mu < 0) throw Error(ErrorKind::OutOfRange, "kernel_diag requires mu >= 0");
  const DegreeRange r = window_degrees(mu, w);
  CompensatedSum s;
  for (int k = r.kmin; k <= r.kmax; ++k) s.add(w(mu - spectral_parameter(k)) * (2.0 * k + 1.0) / kFourPi);
  return s.value();
}

double kernel_offdiag(double mu, double theta, const SpectralWindow& w) {
  if (!(theta > 0.0 && theta <= std::numbers::pi))
    throw Error(ErrorKind::OutOfRange, "kernel_offdiag requires 0 < theta <= pi (use kernel_diag at theta = 0)");
  int kmax = 0;
  const std::vector<double> weights = degree_weights(mu, w, kmax);
  return legendre_weighted(weights, kmax, std::cos(theta));
}

namespace {

std::vector<Quaternion> level_elements(std::int64_t n) {
  require_level(n);
  return enumerate_Rn(n);
}

}  // namespace

double hecke_kernel_diag(std::int64_t n, double mu, const Vector3& x, const SpectralWindow& w, const Character& chi) {
  const std::vector<Quaternion> elems = level_elements(n);
  int kmax = 0;
  const std::vector<double> weights = degree_weights(mu, w, kmax);
  const Vector3 xn = x.normalized();
  std::vector<double> terms(elems.size());
  const auto count = static_cast<std::ptrdiff_t>(elems.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const Quaternion& q = elems[i];
    double v = legendre_weighted(weights, kmax, (rotation_of(q) * xn).dot(xn));
    if (chi.on_element) v *= std::conj(chi.on_element(q)).real();
    terms[i] = v;
  }
  CompensatedSum s;
  for (double t : terms) s.add(t);
  return 0.5 * s.value();
}

double reference::hecke_kernel_diag(std::int64_t n, double mu, const Vector3& x, const SpectralWindow& w) {
  const std::vector<Quaternion> elems = level_elements(n);
  const Vector3 xn = x.normalized();
  const DegreeRange r = window_degrees(mu, w);
  double total = 0.0;
  for (const Quaternion& q : elems) {
    const double c = std::clamp((rotation_of(q) * xn).dot(xn), -1.0, 1.0);
    const std::vector<double> P = legendre_series(std::max(r.kmax, 0), c);
    for (int k = r.kmin; k <= r.kmax; ++k)
      total += 0.5 * w(mu - spectral_parameter(k)) * (2.0 * k + 1.0) / kFourPi * P[k];
  }
  return total;
}

double hecke_kernel_diag_spectral(std::int64_t n, double mu, const Vector3& x, const SpectralWindow& w,
                                  const HeckeSpectrum& spectrum) {
  require_level(n);
  if (!spectrum.has_level(n))
    throw Error(ErrorKind::InsufficientData, "eigendata lacks level " + std::to_string(n));
  const DegreeRange r = window_degrees(mu, w);
  if (r.kmax > spectrum.kmax())
    throw Error(ErrorKind::InsufficientData, "eigendata stops at degree " + std::to_string(spectrum.kmax()) +
                                                 ", window needs " + std::to_string(r.kmax));
  const std::vector<Eigen::VectorXd> Y = real_harmonics_upto(std::max(r.kmax, 0), x.normalized());
  CompensatedSum s;
  for (int k = r.kmin; k <= r.kmax; ++k) {
    const HeckeMaassBasis& b = spectrum.degree(k);
    const Eigen::VectorXd phi = b.vectors.transpose() * Y[k];
    double inner = 0.0;
    for (int j = 0; j < b.dim(); ++j) inner += b.lambda(j, n) * phi(j) * phi(j);
    s.add(w(mu - spectral_parameter(k)) * inner);
  }
  return s.value();
}

std::int64_t weyl_count(double mu) {
  std::int64_t total = 0;
  for (int k = 0; spectral_parameter(k) <= mu; ++k) total += 2 * k + 1;
  return total;
}

double sharp_projector_diag(double mu) {
  double total = 0.0;
  for (int k = 0; spectral_parameter(k) <= mu + 1.0; ++k)
    if (spectral_parameter(k) > mu) total += (2.0 * k + 1.0) / kFourPi;
  return total;
}

}  // namespace heckelab
