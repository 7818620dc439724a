#include "heckelab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "heckelab/checked.hpp"
#include "heckelab/error.hpp"
#include "heckelab/hecke.hpp"

namespace heckelab {

HyperbolicPoint::HyperbolicPoint(double re, double im) : re_(re), im_(im) {
  if (!(im > 0.0) || !std::isfinite(re) || !std::isfinite(im))
    throw Error(ErrorKind::OutOfRange, "upper half-plane point needs Im > 0, got " + std::to_string(im));
}

double u_invariant(const HyperbolicPoint& z, const HyperbolicPoint& w) {
  const double dr = z.re() - w.re(), di = z.im() - w.im();
  return (dr * dr + di * di) / (z.im() * w.im());
}

double hyperbolic_distance(const HyperbolicPoint& z, const HyperbolicPoint& w) {
  return std::acosh(1.0 + 0.5 * u_invariant(z, w));
}

HyperbolicPoint mobius(const Eigen::Matrix2d& g, const HyperbolicPoint& z) {
  const std::complex<double> zc(z.re(), z.im());
  const std::complex<double> w = (g(0, 0) * zc + g(0, 1)) / (g(1, 0) * zc + g(1, 1));
  // det g > 0 keeps w in the upper half plane; guard against rounding at tiny Im
  return HyperbolicPoint(w.real(), std::max(w.imag(), std::numeric_limits<double>::min()));
}

double sphere_distance(const Vector3& x, const Vector3& y) {
  return std::acos(std::clamp(x.normalized().dot(y.normalized()), -1.0, 1.0));
}

namespace {

std::vector<double> sphere_displacements(std::int64_t n, const Vector3& x) {
  require_level(n);
  const Vector3 xn = x.normalized();
  std::vector<double> d;
  for (const Quaternion& q : enumerate_Rn(n)) d.push_back(sphere_distance(xn, rotation_of(q) * xn));
  std::sort(d.begin(), d.end());
  return d;
}

std::int64_t count_below(const std::vector<double>& sorted, double delta) {
  return std::lower_bound(sorted.begin(), sorted.end(), delta) - sorted.begin();
}

}  // namespace

std::int64_t count_sphere(std::int64_t n, const Vector3& x, double delta) {
  if (delta < 0) throw Error(ErrorKind::OutOfRange, "count_sphere requires delta >= 0");
  return count_below(sphere_displacements(n, x), delta);
}

std::array<std::int64_t, 4> hyperbolic_box(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z,
                                           double delta) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "hyperbolic counting needs n >= 1");
  if (delta < 0) throw Error(ErrorKind::OutOfRange, "hyperbolic counting needs delta >= 0");
  const double sa = std::sqrt(static_cast<double>(alg.a()));
  const double b = static_cast<double>(alg.b());
  const double sy = std::sqrt(z.im());
  Eigen::Matrix2d h, hinv;
  h << sy, z.re() / sy, 0.0, 1.0 / sy;
  hinv << 1.0 / sy, -z.re() / sy, 0.0, sy;
  std::array<Eigen::Matrix2d, 4> basis;
  basis[0] = Eigen::Matrix2d::Identity();
  basis[1] << -sa, 0.0, 0.0, sa;
  basis[2] << 0.0, 1.0, b, 0.0;
  basis[3] << 0.0, sa, -b * sa, 0.0;
  Eigen::Matrix4d A;
  for (int i = 0; i < 4; ++i) {
    const Eigen::Matrix2d B = hinv * basis[i] * h;
    A.col(i) << B(0, 0), B(0, 1), B(1, 0), B(1, 1);
  }
  const Eigen::Matrix4d Ainv = A.inverse();
  const double radius = std::sqrt(static_cast<double>(n) * (delta + 2.0));
  std::array<std::int64_t, 4> box{};
  for (int i = 0; i < 4; ++i) {
    const double bound = 1.1 * Ainv.row(i).norm() * radius;
    if (!std::isfinite(bound) || bound > 5e4)
      throw Error(ErrorKind::EnumerationBoundOverflow,
                  "coordinate box for z = " + std::to_string(z.re()) + " + " + std::to_string(z.im()) +
                      "i is too large (" + std::to_string(bound) + ")");
    box[i] = static_cast<std::int64_t>(std::floor(bound)) + 1;
  }
  return box;
}

std::vector<HyperbolicHit> hyperbolic_hits(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z,
                                           double delta) {
  const auto box = hyperbolic_box(alg, n, z, delta);
  const std::int64_t a = alg.a(), b = alg.b();
  std::vector<HyperbolicHit> hits;
  for (std::int64_t x1 = -box[1]; x1 <= box[1]; ++x1) {
    for (std::int64_t x2 = -box[2]; x2 <= box[2]; ++x2) {
      for (std::int64_t x3 = -box[3]; x3 <= box[3]; ++x3) {
        // x0^2 = n + a x1^2 + b x2^2 - ab x3^2
        const std::int64_t r = n + a * x1 * x1 + b * x2 * x2 - a * b * x3 * x3;
        if (r < 0) continue;
        const std::int64_t root = checked::isqrt(r);
        if (root * root != r || root > box[0]) continue;
        for (int sign = root == 0 ? 1 : -1; sign <= 1; sign += 2) {
          const std::int64_t x0 = sign * root;
          const OrderElement e{alg, x0, x1, x2, x3};
          const double u = u_invariant(z, mobius(theta_embed(e), z));
          if (!(u < delta)) continue;
          if (std::abs(x0) == box[0] || std::abs(x1) == box[1] || std::abs(x2) == box[2] || std::abs(x3) == box[3])
            throw Error(ErrorKind::EnumerationBoundOverflow, "element found on the outer shell of the box");
          hits.push_back({e, u});
        }
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const HyperbolicHit& p, const HyperbolicHit& q) {
    return std::tie(p.element.x0, p.element.x1, p.element.x2, p.element.x3) <
           std::tie(q.element.x0, q.element.x1, q.element.x2, q.element.x3);
  });
  return hits;
}

std::int64_t count_hyperbolic(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z, double delta) {
  return static_cast<std::int64_t>(hyperbolic_hits(alg, n, z, delta).size());
}

CountingProfile sphere_profile(std::int64_t n, const Vector3& x, std::span<const double> deltas) {
  CountingProfile p;
  p.setting = CountingSetting::Sphere;
  p.n = n;
  p.base = x.normalized().eval();
  p.convention = "dist < delta (geodesic angle on S^2)";
  const std::vector<double> d = sphere_displacements(n, x);
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end());
  for (double delta : sorted) p.rows.emplace_back(delta, count_below(d, delta));
  return p;
}

CountingProfile hyperbolic_profile(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z,
                                   std::span<const double> deltas) {
  CountingProfile p;
  p.setting = CountingSetting::Hyperbolic;
  p.n = n;
  p.base = z;
  p.convention = "u(z, alpha z) < delta";
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) return p;
  std::vector<double> us;
  for (const HyperbolicHit& h : hyperbolic_hits(alg, n, z, sorted.back())) us.push_back(h.u);
  std::sort(us.begin(), us.end());
  for (double delta : sorted) p.rows.emplace_back(delta, count_below(us, delta));
  return p;
}

double bound_model(BoundModel model, double delta, std::int64_t n, double eps) {
  const double nn = static_cast<double>(n);
  switch (model) {
    case BoundModel::Constant: return 1.0;
    case BoundModel::VanderKam:
      if (delta < 1.0 / nn) return std::sqrt(delta) * std::pow(nn, 1.0 + eps) + std::pow(nn, eps);
      return std::pow(nn, 0.5 + eps) + std::pow(delta, 2.0 / 3.0) * std::pow(nn, 1.0 + eps);
    case BoundModel::HyperbolicLemma:
      return (delta + std::pow(delta, 0.25)) * std::pow(nn, 1.0 + eps) + std::pow(nn, eps);
  }
  return 1.0;
}

BoundFit fit_bound(std::span<const CountingProfile> profiles, BoundModel model, double eps) {
  BoundFit fit;
  fit.model = model;
  fit.eps = eps;
  double smm = 0.0, smM = 0.0;
  std::int64_t first = -1;
  bool all_equal = true;
  std::vector<std::pair<double, double>> pts;
  for (const CountingProfile& p : profiles) {
    for (const auto& [delta, M] : p.rows) {
      if (first < 0) first = M;
      all_equal = all_equal && M == first;
      const double m = bound_model(model, delta, p.n, eps);
      pts.emplace_back(static_cast<double>(M), m);
      smm += m * m;
      smM += m * static_cast<double>(M);
      fit.max_ratio = std::max(fit.max_ratio, static_cast<double>(M) / m);
    }
  }
  fit.rows = pts.size();
  if (fit.rows < 10) throw Error(ErrorKind::InsufficientData, "bound fit needs at least 10 rows");
  if (all_equal && model != BoundModel::Constant)
    throw Error(ErrorKind::DegenerateProfile, "every count in the profile is equal; nothing to fit");
  fit.constant = smM / smm;
  double ss = 0.0;
  for (const auto& [M, m] : pts) ss += (M - fit.constant * m) * (M - fit.constant * m);
  fit.rms_residual = std::sqrt(ss / static_cast<double>(pts.size()));
  return fit;
}

BoundFit fit_bound(const CountingProfile& profile, BoundModel model, double eps) {
  return fit_bound(std::span<const CountingProfile>(&profile, 1), model, eps);
}

}  // namespace heckelab
