#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heckelab/quaternion.hpp"

namespace heckelab {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2017ULL;

/// T_n = 1/2 sum_{alpha in R(n)} rho(R_alpha) restricted to degree-k harmonics (real basis).
struct HeckeMatrix {
  std::int64_t n = 1;
  int k = 0;
  Eigen::MatrixXd entries;
};

/// Throws ErrorKind::EmptyLevel unless n = 1 mod 4.
void require_level(std::int64_t n);

HeckeMatrix hecke_matrix(std::int64_t n, int k);

/// T_n on every degree 0..kmax at once. OpenMP-parallel over the row index m of the
/// complex-basis accumulation; the alpha-sum order is fixed, so results do not depend on
/// the thread count.
std::vector<Eigen::MatrixXd> hecke_matrices(std::int64_t n, int kmax);

namespace reference {

/// Serial definition-level construction: 1/2 sum over all of R(n) of rotation_rep_matrix.
Eigen::MatrixXd hecke_matrix(std::int64_t n, int k);

}  // namespace reference

/// 1/2 sum_{alpha in R(n)} chi_k(angle(R_alpha)), chi_k(t) = sin((2k+1)t/2) / sin(t/2).
double hecke_trace_formula(std::int64_t n, int k);

/// Joint eigendata of Laplace and T_n (n in levels) on degree-k harmonics.
struct HeckeMaassBasis {
  int k = 0;
  double laplace_eigenvalue = 0.0;
  std::vector<std::int64_t> levels;
  Eigen::MatrixXd vectors;      // columns j = 0..2k, orthonormal
  Eigen::MatrixXd eigenvalues;  // (2k+1) x levels.size(): lambda_j(n)
  std::vector<int> cluster;     // equal ids share every listed eigenvalue
  double max_residual = 0.0;

  int dim() const noexcept { return 2 * k + 1; }
  std::optional<std::size_t> level_index(std::int64_t n) const;
  double lambda(int j, std::int64_t n) const;
  /// lambda_j(n) / sqrt(n)
  double eta(int j, std::int64_t n) const;
  int cluster_count() const;
};

/// Diagonalizes sum_i w_i T_{n_i} / sigma(n_i) with seeded weights w_i in [0.5, 1.5), then
/// refines every eigenvalue cluster (gap < 1e-6) with the next operator restricted to it.
/// Throws ErrorKind::DegeneracyUnresolved if any joint residual exceeds 1e-7.
HeckeMaassBasis joint_eigenbasis(int k, std::span<const std::int64_t> levels,
                                 std::uint64_t seed = kDefaultSeed);
HeckeMaassBasis joint_eigenbasis(int k, std::span<const Eigen::MatrixXd> matrices,
                                 std::span<const std::int64_t> levels, std::uint64_t seed = kDefaultSeed);

/// Joint eigendata for every degree 0..kmax (degrees are diagonalized independently, in parallel).
class HeckeSpectrum {
 public:
  HeckeSpectrum(std::vector<std::int64_t> levels, int kmax, std::uint64_t seed = kDefaultSeed);

  int kmax() const noexcept { return static_cast<int>(bases_.size()) - 1; }
  const std::vector<std::int64_t>& levels() const noexcept { return levels_; }
  const HeckeMaassBasis& degree(int k) const;
  bool has_level(std::int64_t n) const;

 private:
  std::vector<std::int64_t> levels_;
  std::vector<HeckeMaassBasis> bases_;
};

/// sigma(n) = sum of divisors; equals |R(n)| / 2 for n = 1 mod 4.
std::int64_t divisor_sum(std::int64_t n);

/// Seeded uniform doubles in [0, 1), bit-identical across platforms.
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed) : gen_(seed) {}
  double next() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace heckelab
