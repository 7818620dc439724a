#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heckelab/harmonics.hpp"
#include "heckelab/hecke.hpp"
#include "heckelab/window.hpp"

namespace heckelab {

/// mu_k = sqrt(k (k + 1)), the square root of the Laplace eigenvalue on degree k.
double spectral_parameter(int k);

/// Degrees entering a window sum at mu: every k with |mu - mu_k| <= tail cutoff.
struct DegreeRange {
  int kmin = 0;
  int kmax = -1;
};
DegreeRange window_degrees(double mu, const SpectralWindow& w);

/// Character hook for the twisted sums: values on elements of R(n) and on integers d.
/// Only the trivial character is constructed.
struct Character {
  std::function<std::complex<double>(const Quaternion&)> on_element;
  std::function<std::complex<double>(std::int64_t)> on_integer;

  static Character trivial();
  bool is_trivial() const noexcept { return !on_element && !on_integer; }
};

/// sum_k rho(mu - mu_k) (2k+1) / 4 pi: the diagonal of the smoothed projector on S^2.
double kernel_diag(double mu, const SpectralWindow& w);

/// sum_k rho(mu - mu_k) (2k+1) / 4 pi P_k(cos theta), 0 < theta <= pi.
double kernel_offdiag(double mu, double theta, const SpectralWindow& w);

/// Geometric side: 1/2 sum_{alpha in R(n)} conj(chi(alpha)) sum_k rho(mu - mu_k) (2k+1)/4pi P_k(R_alpha x . x).
/// OpenMP-parallel over alpha, reduced in enumeration order.
double hecke_kernel_diag(std::int64_t n, double mu, const Vector3& x, const SpectralWindow& w,
                         const Character& chi = Character::trivial());

namespace reference {

/// Serial evaluation of the same geometric sum.
double hecke_kernel_diag(std::int64_t n, double mu, const Vector3& x, const SpectralWindow& w);

}  // namespace reference

/// Spectral side: sum_k rho(mu - mu_k) sum_j lambda_j(n) |phi_j(x)|^2 from joint eigendata.
double hecke_kernel_diag_spectral(std::int64_t n, double mu, const Vector3& x, const SpectralWindow& w,
                                  const HeckeSpectrum& spectrum);

/// Sharp-window reference: #{(k, m) : mu_k <= mu} = sum_{mu_k <= mu} (2k+1).
std::int64_t weyl_count(double mu);
/// Sharp projector onto mu < mu_k <= mu + 1 on the diagonal: sum (2k+1)/4pi.
double sharp_projector_diag(double mu);

struct KernelScan {
  std::string mode;  // diag, offdiag, hecke
  std::int64_t level = 1;
  std::vector<double> mu;
  std::vector<double> theta;        // offdiag only
  std::vector<std::vector<double>> values;  // [mu index][theta index], or a single column
  int max_degree = 0;               // largest k entering any sum
};

}  // namespace heckelab
