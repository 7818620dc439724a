#include "heckelab/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <numeric>
#include <random>
#include <string>

#include "heckelab/error.hpp"
#include "heckelab/harmonics.hpp"
#include "heckelab/linalg.hpp"

namespace heckelab {

void require_level(std::int64_t n) {
  if (n < 1 || n % 4 != 1)
    throw Error(ErrorKind::EmptyLevel, "R(n) is empty unless n = 1 mod 4 (n = " + std::to_string(n) + ")");
}

std::int64_t divisor_sum(std::int64_t n) {
  std::int64_t s = 0;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    s += d;
    if (d * d != n) s += n / d;
  }
  return s;
}

namespace {

struct AlphaData {
  double cos_beta, log_cos_half, log_sin_half;
  double alpha, gamma;
  bool cos_zero, sin_zero;
};

}  // namespace

std::vector<Eigen::MatrixXd> hecke_matrices(std::int64_t n, int kmax) {
  require_level(n);
  if (kmax < 0) throw Error(ErrorKind::OutOfRange, "kmax must be non-negative");
  // alpha and -alpha give the same rotation; keep a0 > 0 and drop the factor 1/2.
  std::vector<AlphaData> alphas;
  for (const Quaternion& q : enumerate_Rn(n)) {
    if (q.a0 < 0) continue;
    const EulerZYZ e = euler_of(SU2Element::from(q));
    const double ch = std::cos(0.5 * e.beta), sh = std::sin(0.5 * e.beta);
    alphas.push_back({std::cos(e.beta), std::log(std::abs(ch)), std::log(std::abs(sh)), e.alpha, e.gamma,
                      std::abs(ch) < 1e-300, std::abs(sh) < 1e-300});
  }
  const std::size_t na = alphas.size();
  const int K = kmax;
  std::vector<double> lf(2 * K + 2);
  for (std::size_t v = 0; v < lf.size(); ++v) lf[v] = std::lgamma(static_cast<double>(v) + 1.0);

  std::vector<Eigen::MatrixXcd> S(K + 1);
  for (int j = 0; j <= K; ++j) S[j] = Eigen::MatrixXcd::Zero(2 * j + 1, 2 * j + 1);

#pragma omp parallel for schedule(dynamic)
  for (int m1 = -K; m1 <= K; ++m1) {
    std::vector<double> prev(na), cur(na);
    std::vector<std::complex<double>> w(na);
    for (int m2 = -K; m2 <= K; ++m2) {
      const int l0 = std::max(std::abs(m1), std::abs(m2));
      const int s = std::max(0, m2 - m1);
      const int pc = 2 * l0 + m2 - m1 - 2 * s;
      const int ps = m1 - m2 + 2 * s;
      const double log_coef = 0.5 * (lf[l0 + m1] + lf[l0 - m1] + lf[l0 + m2] + lf[l0 - m2]) -
                              (lf[l0 + m2 - s] + lf[s] + lf[m1 - m2 + s] + lf[l0 - m1 - s]);
      const double sign = ((m1 - m2 + s) % 2 == 0) ? 1.0 : -1.0;
      for (std::size_t a = 0; a < na; ++a) {
        const AlphaData& d = alphas[a];
        // beta in [0, pi]: cos(beta/2), sin(beta/2) >= 0
        if ((pc > 0 && d.cos_zero) || (ps > 0 && d.sin_zero)) {
          cur[a] = 0.0;
        } else {
          double lg = log_coef;
          if (pc > 0) lg += pc * d.log_cos_half;
          if (ps > 0) lg += ps * d.log_sin_half;
          cur[a] = sign * std::exp(lg);
        }
        prev[a] = 0.0;
        w[a] = std::polar(1.0, m1 * d.alpha + m2 * d.gamma);
      }
      for (int j = l0;; ++j) {
        std::complex<double> acc = 0.0;
        for (std::size_t a = 0; a < na; ++a) acc += w[a] * cur[a];
        S[j](m1 + j, m2 + j) = acc;
        if (j == K) break;
        const WignerStep st = wigner_step(j, m1, m2);
        for (std::size_t a = 0; a < na; ++a) {
          const double next = st.a * (alphas[a].cos_beta - st.b) * cur[a] - st.c * prev[a];
          prev[a] = cur[a];
          cur[a] = next;
        }
      }
    }
  }

  std::vector<Eigen::MatrixXd> out(K + 1);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j <= K; ++j) {
    const Eigen::MatrixXcd U = real_basis_transform(j);
    Eigen::MatrixXd H = (U * S[j] * U.adjoint()).real();
    out[j] = 0.5 * (H + H.transpose());
  }
  return out;
}

HeckeMatrix hecke_matrix(std::int64_t n, int k) {
  if (k < 0) throw Error(ErrorKind::OutOfRange, "harmonic degree must be non-negative");
  auto all = hecke_matrices(n, k);
  return {n, k, std::move(all.back())};
}

Eigen::MatrixXd reference::hecke_matrix(std::int64_t n, int k) {
  require_level(n);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * k + 1, 2 * k + 1);
  for (const Quaternion& q : enumerate_Rn(n)) H += 0.5 * rotation_rep_matrix(k, SU2Element::from(q));
  return H;
}

double hecke_trace_formula(std::int64_t n, int k) {
  require_level(n);
  double total = 0.0;
  for (const Quaternion& q : enumerate_Rn(n)) {
    const double t = rotation_angle(q);
    const double sh = std::sin(0.5 * t);
    total += std::abs(sh) < 1e-12 ? (2.0 * k + 1.0) : std::sin((2.0 * k + 1.0) * 0.5 * t) / sh;
  }
  return 0.5 * total;
}

std::optional<std::size_t> HeckeMaassBasis::level_index(std::int64_t n) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == n) return i;
  return std::nullopt;
}

double HeckeMaassBasis::lambda(int j, std::int64_t n) const {
  if (n == 1) return 1.0;
  const auto idx = level_index(n);
  if (!idx) throw Error(ErrorKind::InsufficientData, "level " + std::to_string(n) + " not in eigendata");
  return eigenvalues(j, static_cast<Eigen::Index>(*idx));
}

double HeckeMaassBasis::eta(int j, std::int64_t n) const { return lambda(j, n) / std::sqrt(static_cast<double>(n)); }

int HeckeMaassBasis::cluster_count() const {
  return cluster.empty() ? 0 : *std::max_element(cluster.begin(), cluster.end()) + 1;
}

namespace {

constexpr double kClusterGap = 1e-6;
constexpr double kJointResidual = 1e-7;

// Splits sorted eigenvalues into runs whose consecutive gaps are < kClusterGap.
std::vector<std::pair<int, int>> runs_of(const Eigen::VectorXd& vals) {
  std::vector<std::pair<int, int>> runs;
  const int n = static_cast<int>(vals.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || vals(i) - vals(i - 1) >= kClusterGap) {
      runs.emplace_back(start, i);
      start = i;
    }
  }
  return runs;
}

// Refines the columns [begin, end) of V against operators ops[next..].
void refine(Eigen::MatrixXd& V, int begin, int end, std::span<const Eigen::MatrixXd> ops,
            std::span<const double> scales, std::size_t next) {
  if (end - begin < 2 || next >= ops.size()) return;
  const Eigen::MatrixXd block = V.middleCols(begin, end - begin);
  const Eigen::MatrixXd restricted = block.transpose() * ops[next] * block / scales[next];
  const SymmetricEigen sub = symmetric_eigen(0.5 * (restricted + restricted.transpose()));
  V.middleCols(begin, end - begin) = block * sub.vectors;
  for (const auto& [b, e] : runs_of(sub.values)) refine(V, begin + b, begin + e, ops, scales, next + 1);
}

}  // namespace

HeckeMaassBasis joint_eigenbasis(int k, std::span<const Eigen::MatrixXd> matrices,
                                 std::span<const std::int64_t> levels, std::uint64_t seed) {
  if (matrices.size() != levels.size()) throw Error(ErrorKind::InsufficientData, "one matrix per level required");
  const int dim = 2 * k + 1;
  HeckeMaassBasis basis;
  basis.k = k;
  basis.laplace_eigenvalue = static_cast<double>(k) * (k + 1);
  basis.levels.assign(levels.begin(), levels.end());

  std::vector<double> scales;
  for (std::int64_t n : levels) scales.push_back(static_cast<double>(divisor_sum(n)));

  Eigen::MatrixXd V;
  if (levels.empty()) {
    V = Eigen::MatrixXd::Identity(dim, dim);
  } else {
    SeededUniform rng(seed);
    Eigen::MatrixXd combo = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t i = 0; i < levels.size(); ++i) combo += (0.5 + rng.next()) * matrices[i] / scales[i];
    const SymmetricEigen top = symmetric_eigen(combo);
    V = top.vectors;
    for (const auto& [b, e] : runs_of(top.values)) refine(V, b, e, matrices, scales, 0);
  }

  basis.vectors = V;
  basis.eigenvalues.resize(dim, static_cast<Eigen::Index>(levels.size()));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const Eigen::MatrixXd TV = matrices[i] * V;
    for (int j = 0; j < dim; ++j) {
      const double lam = V.col(j).dot(TV.col(j));
      basis.eigenvalues(j, static_cast<Eigen::Index>(i)) = lam;
      basis.max_residual = std::max(basis.max_residual, (TV.col(j) - lam * V.col(j)).norm());
    }
  }
  if (basis.max_residual > kJointResidual) {
    throw Error(ErrorKind::DegeneracyUnresolved,
                "joint residual " + std::to_string(basis.max_residual) + " at degree " + std::to_string(k) +
                    " exceeds " + std::to_string(kJointResidual) + " after cluster refinement");
  }

  // Residual clusters: forms sharing every listed eigenvalue.
  basis.cluster.assign(dim, -1);
  int next_id = 0;
  for (int j = 0; j < dim; ++j) {
    if (basis.cluster[j] >= 0) continue;
    basis.cluster[j] = next_id;
    for (int i = j + 1; i < dim; ++i) {
      if (basis.cluster[i] >= 0) continue;
      bool same = true;
      for (std::size_t l = 0; l < levels.size() && same; ++l)
        same = std::abs(basis.eigenvalues(i, l) - basis.eigenvalues(j, l)) < kClusterGap * scales[l];
      if (same) basis.cluster[i] = next_id;
    }
    ++next_id;
  }
  return basis;
}

HeckeMaassBasis joint_eigenbasis(int k, std::span<const std::int64_t> levels, std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> mats;
  for (std::int64_t n : levels) mats.push_back(hecke_matrix(n, k).entries);
  return joint_eigenbasis(k, mats, levels, seed);
}

HeckeSpectrum::HeckeSpectrum(std::vector<std::int64_t> levels, int kmax, std::uint64_t seed)
    : levels_(std::move(levels)), bases_(kmax + 1) {
  for (std::int64_t n : levels_) require_level(n);
  std::vector<std::vector<Eigen::MatrixXd>> per_level;
  for (std::int64_t n : levels_) per_level.push_back(hecke_matrices(n, kmax));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int k = kmax; k >= 0; --k) {
    try {
      std::vector<Eigen::MatrixXd> mats;
      for (auto& lvl : per_level) mats.push_back(lvl[k]);
      bases_[k] = joint_eigenbasis(k, mats, levels_, seed);
    } catch (...) {
#pragma omp critical(heckelab_spectrum_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

const HeckeMaassBasis& HeckeSpectrum::degree(int k) const {
  if (k < 0 || k > kmax())
    throw Error(ErrorKind::InsufficientData, "degree " + std::to_string(k) + " outside computed eigendata");
  return bases_[k];
}

bool HeckeSpectrum::has_level(std::int64_t n) const {
  return n == 1 || std::find(levels_.begin(), levels_.end(), n) != levels_.end();
}

}  // namespace heckelab
