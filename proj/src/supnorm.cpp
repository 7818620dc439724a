#include "heckelab/supnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include <Eigen/Geometry>

#include "heckelab/error.hpp"

namespace heckelab {

namespace {

constexpr int kCandidates = 4;
constexpr std::size_t kChunk = 512;
constexpr int kMovesPerStep = 32;

void check_norm(const Eigen::VectorXd& c, int k) {
  if (c.size() != 2 * k + 1)
    throw Error(ErrorKind::OutOfRange, "degree " + std::to_string(k) + " needs " + std::to_string(2 * k + 1) +
                                           " coefficients, got " + std::to_string(c.size()));
  if (std::abs(c.norm() - 1.0) > 1e-9)
    throw Error(ErrorKind::OutOfRange, "form coefficients must have unit norm");
}

// d^k_{m,l}(beta) for m = -k..k, by the recurrence in j for each m.
Eigen::VectorXd small_d_column(int k, int l, double beta) {
  const double ch = std::cos(0.5 * beta), sh = std::sin(0.5 * beta), cb = std::cos(beta);
  Eigen::VectorXd out(2 * k + 1);
  for (int m = -k; m <= k; ++m) {
    double prev = 0.0, cur = wigner_d_seed(m, l, ch, sh);
    for (int j = std::max(std::abs(m), std::abs(l)); j < k; ++j) {
      const WignerStep st = wigner_step(j, m, l);
      const double next = st.a * (cb - st.b) * cur - st.c * prev;
      prev = cur;
      cur = next;
    }
    out(m + k) = cur;
  }
  return out;
}

Eigen::VectorXcd group_coefficients(const FormCoefficients& f) {
  return real_basis_transform(f.k).transpose() * f.c.cast<std::complex<double>>();
}

std::complex<double> group_value(int k, int l, const Eigen::VectorXcd& a, double alpha, double beta,
                                 double gamma) {
  const Eigen::VectorXd d = small_d_column(k, l, beta);
  std::complex<double> s = 0.0;
  for (int m = -k; m <= k; ++m) s += a(m + k) * d(m + k) * std::polar(1.0, m * alpha);
  return std::sqrt(2.0 * k + 1.0) * s * std::polar(1.0, l * gamma);
}

int frequency_for(int resolution) { return std::max(1, (resolution + 4) / 5); }

void require_resolution(int k, int resolution) {
  if (resolution < 4 * k || resolution < 1)
    throw Error(ErrorKind::UnderResolved, "grid resolution " + std::to_string(resolution) +
                                              " is below 4k = " + std::to_string(4 * k));
}

struct Candidate {
  double value;
  std::size_t index;
};

void keep_best(std::vector<Candidate>& best, Candidate c) {
  auto worse = [](const Candidate& p, const Candidate& q) {
    return std::tie(q.value, p.index) < std::tie(p.value, q.index);
  };
  best.push_back(c);
  std::sort(best.begin(), best.end(), worse);
  if (best.size() > kCandidates) best.pop_back();
}

// Best kCandidates grid points for each column.
std::vector<std::vector<Candidate>> grid_candidates(int k, const Eigen::MatrixXd& vectors,
                                                    const std::vector<Vector3>& grid) {
  const Eigen::Index cols = vectors.cols();
  const std::size_t chunks = (grid.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<std::vector<Candidate>>> per_chunk(chunks, std::vector<std::vector<Candidate>>(cols));
#pragma omp parallel for schedule(dynamic)
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    const std::size_t lo = ch * kChunk, hi = std::min(grid.size(), lo + kChunk);
    Eigen::MatrixXd Y(static_cast<Eigen::Index>(hi - lo), 2 * k + 1);
    for (std::size_t i = lo; i < hi; ++i) Y.row(static_cast<Eigen::Index>(i - lo)) = real_harmonics(k, grid[i]);
    const Eigen::MatrixXd V = (Y * vectors).cwiseAbs();
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < V.rows(); ++r)
        if (per_chunk[ch][c].size() < kCandidates || V(r, c) > per_chunk[ch][c].back().value)
          keep_best(per_chunk[ch][c], {V(r, c), lo + static_cast<std::size_t>(r)});
  }
  std::vector<std::vector<Candidate>> out(cols);
  for (std::size_t ch = 0; ch < chunks; ++ch)
    for (Eigen::Index c = 0; c < cols; ++c)
      for (const Candidate& cand : per_chunk[ch][c]) keep_best(out[c], cand);
  return out;
}

// Tangent-plane coordinate ascent on the sphere.
std::pair<double, Vector3> polish_sphere(int k, const Eigen::VectorXd& c, Vector3 x, double step, int steps) {
  auto value = [&](const Vector3& p) { return std::abs(c.dot(real_harmonics(k, p))); };
  double best = value(x);
  for (int s = 0; s < steps; ++s, step *= 0.5) {
    for (int move = 0; move < kMovesPerStep; ++move) {
      const Vector3 axis = std::abs(x.z()) < 0.9 ? Vector3::UnitZ() : Vector3::UnitX();
      const Vector3 e1 = x.cross(axis).normalized(), e2 = x.cross(e1);
      bool improved = false;
      for (const Vector3& e : {e1, Vector3(-e1), e2, Vector3(-e2)}) {
        const Vector3 y = (x + step * e).normalized();
        const double v = value(y);
        if (v > best) {
          best = v;
          x = y;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
  }
  return {best, x};
}

SupNormResult sphere_search(int k, const Eigen::VectorXd& c, const std::vector<Vector3>& grid,
                            const std::vector<Candidate>& cands, int resolution, int polish_steps) {
  SupNormResult r;
  r.grid_points = grid.size();
  r.grid_value = cands.front().value;
  r.value = r.grid_value;
  r.point = grid[cands.front().index];
  const double step = 2.0 * std::numbers::pi / resolution;
  for (const Candidate& cand : cands) {
    const auto [v, x] = polish_sphere(k, c, grid[cand.index], step, polish_steps);
    if (v > r.value) {
      r.value = v;
      r.point = x;
    }
  }
  return r;
}

SupNormResult group_search(const FormCoefficients& f, int resolution, int polish_steps) {
  const int k = f.k, l = f.l;
  const Eigen::VectorXcd a = group_coefficients(f);
  const int na = resolution, nb = resolution / 2 + 1;
  const double da = 2.0 * std::numbers::pi / na, db = std::numbers::pi / (nb - 1);
  std::vector<double> values(static_cast<std::size_t>(na) * nb);
#pragma omp parallel for schedule(dynamic)
  for (int ib = 0; ib < nb; ++ib) {
    const Eigen::VectorXd d = small_d_column(k, l, ib * db);
    for (int ia = 0; ia < na; ++ia) {
      std::complex<double> s = 0.0;
      for (int m = -k; m <= k; ++m) s += a(m + k) * d(m + k) * std::polar(1.0, m * ia * da);
      values[static_cast<std::size_t>(ib) * na + ia] = std::sqrt(2.0 * k + 1.0) * std::abs(s);
    }
  }
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (cands.size() < kCandidates || values[i] > cands.back().value) keep_best(cands, {values[i], i});
  SupNormResult r;
  r.grid_points = values.size();
  r.grid_value = cands.front().value;
  r.value = r.grid_value;
  auto angles_of = [&](std::size_t i) {
    return EulerZYZ{static_cast<double>(i % na) * da, static_cast<double>(i / na) * db, 0.0};
  };
  r.angles = angles_of(cands.front().index);
  auto value = [&](double al, double be) { return std::abs(group_value(k, l, a, al, be, 0.0)); };
  for (const Candidate& cand : cands) {
    EulerZYZ e = angles_of(cand.index);
    double best = cand.value, step = da;
    for (int s = 0; s < polish_steps; ++s, step *= 0.5) {
      for (int move = 0; move < kMovesPerStep; ++move) {
        bool improved = false;
        for (const auto& [dal, dbe] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
          const double nb_ = std::clamp(e.beta + dbe, 0.0, std::numbers::pi);
          const double v = value(e.alpha + dal, nb_);
          if (v > best) {
            best = v;
            e.alpha += dal;
            e.beta = nb_;
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
    }
    if (best > r.value) {
      r.value = best;
      r.angles = e;
    }
  }
  r.angles.alpha = std::remainder(r.angles.alpha, 2.0 * std::numbers::pi);
  r.point = rotation_of(r.angles) * Vector3::UnitZ();
  return r;
}

}  // namespace

FormCoefficients FormCoefficients::sphere(int k, Eigen::VectorXd c) {
  if (k < 0) throw Error(ErrorKind::OutOfRange, "negative degree");
  check_norm(c, k);
  return {k, 0, std::move(c), FormDomain::Sphere};
}

FormCoefficients FormCoefficients::group(int k, int l, Eigen::VectorXd c) {
  if (k < 0) throw Error(ErrorKind::OutOfRange, "negative degree");
  if (std::abs(l) > k)
    throw Error(ErrorKind::OutOfRange, "K-type " + std::to_string(l) + " exceeds degree " + std::to_string(k));
  check_norm(c, k);
  return {k, l, std::move(c), FormDomain::Group};
}

std::complex<double> evaluate_form(const FormCoefficients& f, const Vector3& x) {
  if (f.domain != FormDomain::Sphere) throw Error(ErrorKind::OutOfRange, "group form evaluated at a sphere point");
  return f.c.dot(real_harmonics(f.k, x.normalized()));
}

std::complex<double> evaluate_form(const FormCoefficients& f, const EulerZYZ& g) {
  if (f.domain != FormDomain::Group) throw Error(ErrorKind::OutOfRange, "sphere form evaluated at a group element");
  if (std::abs(f.l) > f.k) throw Error(ErrorKind::OutOfRange, "K-type exceeds degree");
  return group_value(f.k, f.l, group_coefficients(f), g.alpha, g.beta, g.gamma);
}

std::complex<double> evaluate_form(const FormCoefficients& f, const SU2Element& g) {
  return evaluate_form(f, euler_of(g));
}

std::vector<Vector3> icosahedral_grid(int frequency) {
  if (frequency < 1) throw Error(ErrorKind::OutOfRange, "grid frequency must be positive");
  std::vector<Vector3> v;
  v.emplace_back(0, 0, 1);
  const double z = 1.0 / std::sqrt(5.0), r = 2.0 / std::sqrt(5.0);
  for (int i = 0; i < 5; ++i) {
    const double p = 2.0 * std::numbers::pi * i / 5.0;
    v.emplace_back(r * std::cos(p), r * std::sin(p), z);
  }
  for (int i = 0; i < 5; ++i) {
    const double p = 2.0 * std::numbers::pi * i / 5.0 + std::numbers::pi / 5.0;
    v.emplace_back(r * std::cos(p), r * std::sin(p), -z);
  }
  v.emplace_back(0, 0, -1);
  std::vector<std::array<int, 3>> faces;
  for (int i = 0; i < 5; ++i) {
    const int u0 = 1 + i, u1 = 1 + (i + 1) % 5, l0 = 6 + i, l1 = 6 + (i + 1) % 5;
    faces.push_back({0, u0, u1});
    faces.push_back({u0, l0, u1});
    faces.push_back({u1, l0, l1});
    faces.push_back({11, l1, l0});
  }
  std::vector<Vector3> pts;
  pts.reserve(static_cast<std::size_t>(20) * (frequency + 1) * (frequency + 2) / 2);
  const double f = frequency;
  for (const auto& face : faces) {
    for (int i = 0; i <= frequency; ++i) {
      for (int j = 0; i + j <= frequency; ++j) {
        const int kk = frequency - i - j;
        // Terms with zero weight are skipped so shared edges reproduce bit-identical points.
        Vector3 p = Vector3::Zero();
        if (i) p += (i / f) * v[face[0]];
        if (j) p += (j / f) * v[face[1]];
        if (kk) p += (kk / f) * v[face[2]];
        pts.push_back(p.normalized());
      }
    }
  }
  auto lex = [](const Vector3& a, const Vector3& b) {
    return std::tie(a.x(), a.y(), a.z()) < std::tie(b.x(), b.y(), b.z());
  };
  std::sort(pts.begin(), pts.end(), lex);
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vector3& a, const Vector3& b) { return a == b; }),
            pts.end());
  return pts;
}

SupNormResult sup_norm_estimate(const FormCoefficients& f, int resolution, int polish_steps) {
  require_resolution(f.k, resolution);
  if (f.domain == FormDomain::Group) return group_search(f, resolution, polish_steps);
  const std::vector<Vector3> grid = icosahedral_grid(frequency_for(resolution));
  const Eigen::MatrixXd vec = f.c;
  const auto cands = grid_candidates(f.k, vec, grid);
  return sphere_search(f.k, f.c, grid, cands[0], resolution, polish_steps);
}

std::vector<SupNormResult> sup_norms(int k, const Eigen::MatrixXd& vectors, int resolution, int polish_steps) {
  require_resolution(k, resolution);
  const std::vector<Vector3> grid = icosahedral_grid(frequency_for(resolution));
  const auto cands = grid_candidates(k, vectors, grid);
  std::vector<SupNormResult> out(static_cast<std::size_t>(vectors.cols()));
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index c = 0; c < vectors.cols(); ++c)
    out[c] = sphere_search(k, vectors.col(c), grid, cands[c], resolution, polish_steps);
  return out;
}

namespace reference {

std::vector<double> grid_max(int k, const Eigen::MatrixXd& vectors, int resolution) {
  require_resolution(k, resolution);
  std::vector<double> best(static_cast<std::size_t>(vectors.cols()), 0.0);
  for (const Vector3& x : icosahedral_grid(frequency_for(resolution))) {
    const Eigen::VectorXd y = real_harmonics(k, x);
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) best[c] = std::max(best[c], std::abs(vectors.col(c).dot(y)));
  }
  return best;
}

}  // namespace reference

double grid_mean_square(const FormCoefficients& f, int resolution) {
  if (f.domain != FormDomain::Sphere) throw Error(ErrorKind::OutOfRange, "grid mean needs a sphere form");
  const std::vector<Vector3> grid = icosahedral_grid(frequency_for(resolution));
  double s = 0.0;
  for (const Vector3& x : grid) s += std::norm(evaluate_form(f, x));
  return s / static_cast<double>(grid.size());
}

ExponentFit exponent_fit(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 5) throw Error(ErrorKind::InsufficientData, "exponent fit needs at least 5 samples");
  std::vector<double> lam;
  for (const auto& [l, s] : samples) {
    if (!(l > 0.0) || !(s > 0.0)) throw Error(ErrorKind::DegenerateInput, "exponent fit needs positive samples");
    lam.push_back(l);
  }
  std::sort(lam.begin(), lam.end());
  if (std::adjacent_find(lam.begin(), lam.end()) != lam.end())
    throw Error(ErrorKind::DegenerateInput, "exponent fit needs distinct eigenvalues");
  const double n = static_cast<double>(samples.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [l, s] : samples) {
    mx += std::log(l);
    my += std::log(s);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [l, s] : samples) {
    sxx += (std::log(l) - mx) * (std::log(l) - mx);
    sxy += (std::log(l) - mx) * (std::log(s) - my);
  }
  ExponentFit fit;
  fit.samples = samples.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [l, s] : samples) {
    const double e = std::log(s) - fit.intercept - fit.slope * std::log(l);
    ss += e * e;
  }
  fit.stderr_slope = std::sqrt(ss / (n - 2.0) / sxx);
  return fit;
}

}  // namespace heckelab
