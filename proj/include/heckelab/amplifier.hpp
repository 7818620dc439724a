#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "heckelab/hecke.hpp"
#include "heckelab/kernel.hpp"

namespace heckelab {

/// Sparse amplifier z_n, n <= N, built from the Hecke eigenvalues of one target form.
struct AmplifierVector {
  std::int64_t N = 0;
  std::map<std::int64_t, std::complex<double>> entries;
  int source_k = -1;  // degree of the target form, -1 if hand-built
  int source_j = -1;  // column index in that degree's basis

  std::vector<std::int64_t> support() const;
  /// Admissible primes p with z_p present.
  std::vector<std::int64_t> primes() const;
};

bool is_prime(std::int64_t n);
/// Primes p = 1 mod 4 with p <= limit.
std::vector<std::int64_t> admissible_primes(std::int64_t limit);
/// Ascending divisors by trial division.
std::vector<std::int64_t> divisors(std::int64_t n);

/// z_p = eta_{j0}(p) for admissible p <= sqrt(N), z_{p^2} = -1 for p^2 <= N.
/// Throws ErrorKind::OutOfRange if N < 25 or j0 is out of range, ErrorKind::InsufficientData if a needed
/// level is missing from the eigendata.
AmplifierVector build_amplifier(const HeckeMaassBasis& eig, int j0, std::int64_t N);

/// sum_n z_n eta_j(n)
std::complex<double> amplifier_response(const AmplifierVector& z, const HeckeMaassBasis& eig, int j);

/// max_j |eta_j(p)^2 - eta_j(p^2) - 1|; needs levels p and p^2 in the eigendata.
double relation_residual(const HeckeMaassBasis& eig, std::int64_t p);

/// Levels nm/d^2 over n, m in supp z and d | (n, m), ascending.
std::vector<std::int64_t> composition_levels(const AmplifierVector& z);

/// sum_k rho(mu - mu_k) sum_j |phi_j(x)|^2 |sum_n z_n eta_j(n)|^2.
/// Throws ErrorKind::InsufficientData if the spectrum misses a level of supp z or a degree in the window.
double amplified_sum_spectral(const Vector3& x, double mu, const AmplifierVector& z, const SpectralWindow& w,
                              const HeckeSpectrum& spectrum);

struct AmplifiedTerm {
  std::int64_t n = 0, m = 0, d = 0, level = 0;
  std::complex<double> weight;  // chi(d) d / sqrt(nm) z_n conj(z_m)
  double kernel = 0.0;          // hecke_kernel_diag(level, mu, x)
};

struct GeometricSum {
  double value = 0.0;      // real part
  double imaginary = 0.0;  // residual imaginary part, zero up to rounding
  std::vector<AmplifiedTerm> terms;
};

/// sum_{n,m} sum_{d | (n,m)} chi(d) d / sqrt(nm) z_n conj(z_m) K_{T_{nm/d^2}}(x, x), each level evaluated once.
GeometricSum amplified_sum_geometric_terms(const Vector3& x, double mu, const AmplifierVector& z,
                                           const SpectralWindow& w, const Character& chi = Character::trivial());
double amplified_sum_geometric(const Vector3& x, double mu, const AmplifierVector& z, const SpectralWindow& w,
                               const Character& chi = Character::trivial());

/// sum_{p <= X} eta_j(p)^2 / #{p <= X} over admissible primes present in the eigendata; Deligne gives <= 4.
double rankin_selberg_ratio(const HeckeMaassBasis& eig, int j, std::int64_t X);

}  // namespace heckelab
