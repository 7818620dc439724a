#include "heckelab/amplifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "heckelab/checked.hpp"
#include "heckelab/error.hpp"
#include "heckelab/summation.hpp"

namespace heckelab {

std::vector<std::int64_t> AmplifierVector::support() const {
  std::vector<std::int64_t> s;
  for (const auto& [n, v] : entries) s.push_back(n);
  return s;
}

std::vector<std::int64_t> AmplifierVector::primes() const {
  std::vector<std::int64_t> s;
  for (const auto& [n, v] : entries)
    if (is_prime(n)) s.push_back(n);
  return s;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::int64_t> admissible_primes(std::int64_t limit) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 5; p <= limit; p += 4)
    if (is_prime(p)) ps.push_back(p);
  return ps;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "divisors of a non-positive integer");
  std::vector<std::int64_t> lo, hi;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    lo.push_back(d);
    if (d != n / d) hi.push_back(n / d);
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

AmplifierVector build_amplifier(const HeckeMaassBasis& eig, int j0, std::int64_t N) {
  if (N < 25) throw Error(ErrorKind::OutOfRange, "amplifier length N must be at least 25");
  if (j0 < 0 || j0 >= eig.dim())
    throw Error(ErrorKind::OutOfRange, "target index " + std::to_string(j0) + " outside degree " +
                                           std::to_string(eig.k));
  const std::vector<std::int64_t> ps = admissible_primes(checked::isqrt(N));
  if (ps.empty()) throw Error(ErrorKind::InsufficientData, "no admissible primes up to sqrt(N)");
  AmplifierVector z;
  z.N = N;
  z.source_k = eig.k;
  z.source_j = j0;
  for (std::int64_t p : ps) {
    if (!eig.level_index(p))
      throw Error(ErrorKind::InsufficientData, "eigendata lacks level " + std::to_string(p));
    z.entries[p] = eig.eta(j0, p);
    z.entries[p * p] = -1.0;
  }
  return z;
}

std::complex<double> amplifier_response(const AmplifierVector& z, const HeckeMaassBasis& eig, int j) {
  std::complex<double> s = 0.0;
  for (const auto& [n, v] : z.entries) s += v * eig.eta(j, n);
  return s;
}

double relation_residual(const HeckeMaassBasis& eig, std::int64_t p) {
  if (!eig.level_index(p) || !eig.level_index(p * p))
    throw Error(ErrorKind::InsufficientData, "relation residual needs levels " + std::to_string(p) + " and " +
                                                 std::to_string(p * p));
  double r = 0.0;
  for (int j = 0; j < eig.dim(); ++j) {
    const double e = eig.eta(j, p);
    r = std::max(r, std::abs(e * e - eig.eta(j, p * p) - 1.0));
  }
  return r;
}

std::vector<std::int64_t> composition_levels(const AmplifierVector& z) {
  std::set<std::int64_t> levels;
  for (const auto& [n, zn] : z.entries)
    for (const auto& [m, zm] : z.entries)
      for (std::int64_t d : divisors(std::gcd(n, m))) levels.insert(checked::mul(n / d, m / d));
  return {levels.begin(), levels.end()};
}

double amplified_sum_spectral(const Vector3& x, double mu, const AmplifierVector& z, const SpectralWindow& w,
                              const HeckeSpectrum& spectrum) {
  if (z.entries.empty()) return 0.0;
  for (const auto& [n, v] : z.entries)
    if (n != 1 && !spectrum.has_level(n))
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
    for (int j = 0; j < b.dim(); ++j) inner += phi(j) * phi(j) * std::norm(amplifier_response(z, b, j));
    s.add(w(mu - spectral_parameter(k)) * inner);
  }
  return s.value();
}

GeometricSum amplified_sum_geometric_terms(const Vector3& x, double mu, const AmplifierVector& z,
                                           const SpectralWindow& w, const Character& chi) {
  GeometricSum out;
  std::map<std::int64_t, double> kernels;
  for (std::int64_t level : composition_levels(z)) kernels[level] = hecke_kernel_diag(level, mu, x, w, chi);
  std::complex<double> total = 0.0;
  for (const auto& [n, zn] : z.entries) {
    for (const auto& [m, zm] : z.entries) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(m));
      for (std::int64_t d : divisors(std::gcd(n, m))) {
        AmplifiedTerm t;
        t.n = n;
        t.m = m;
        t.d = d;
        t.level = (n / d) * (m / d);
        const std::complex<double> chid = chi.on_integer ? chi.on_integer(d) : 1.0;
        t.weight = chid * static_cast<double>(d) * scale * zn * std::conj(zm);
        t.kernel = kernels.at(t.level);
        total += t.weight * t.kernel;
        out.terms.push_back(t);
      }
    }
  }
  out.value = total.real();
  out.imaginary = total.imag();
  return out;
}

double amplified_sum_geometric(const Vector3& x, double mu, const AmplifierVector& z, const SpectralWindow& w,
                               const Character& chi) {
  return amplified_sum_geometric_terms(x, mu, z, w, chi).value;
}

double rankin_selberg_ratio(const HeckeMaassBasis& eig, int j, std::int64_t X) {
  double s = 0.0;
  int count = 0;
  for (std::int64_t p : admissible_primes(X)) {
    if (!eig.level_index(p)) continue;
    const double e = eig.eta(j, p);
    s += e * e;
    ++count;
  }
  if (count == 0) throw Error(ErrorKind::InsufficientData, "no admissible prime levels up to X in the eigendata");
  return s / count;
}

}  // namespace heckelab
