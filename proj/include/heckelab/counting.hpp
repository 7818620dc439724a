#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "heckelab/harmonics.hpp"
#include "heckelab/quaternion.hpp"

namespace heckelab {

class HyperbolicPoint {
 public:
  /// Throws ErrorKind::OutOfRange unless im > 0.
  HyperbolicPoint(double re, double im);

  double re() const noexcept { return re_; }
  double im() const noexcept { return im_; }

 private:
  double re_, im_;
};

/// u(z, w) = |z - w|^2 / (Im z Im w)
double u_invariant(const HyperbolicPoint& z, const HyperbolicPoint& w);
/// arcosh(1 + u / 2)
double hyperbolic_distance(const HyperbolicPoint& z, const HyperbolicPoint& w);
/// Fractional linear action of g with det g > 0.
HyperbolicPoint mobius(const Eigen::Matrix2d& g, const HyperbolicPoint& z);

/// Geodesic angle on S^2, in [0, pi].
double sphere_distance(const Vector3& x, const Vector3& y);

/// #{alpha in R(n) : dist(x, R_alpha x) < delta}
std::int64_t count_sphere(std::int64_t n, const Vector3& x, double delta);

/// #{x in order : N(x) = n, u(z, theta(x) z) < delta}
std::int64_t count_hyperbolic(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z, double delta);

/// Coordinate box |x_i| <= bound[i] containing every order element of norm n with u(z, theta(x) z) < delta.
/// Derived from ||h^{-1} theta(x) h||_F^2 < n (delta + 2), h = [[sqrt y, x / sqrt y], [0, 1 / sqrt y]], plus 10%.
/// Throws ErrorKind::EnumerationBoundOverflow when the box is unreasonably large.
std::array<std::int64_t, 4> hyperbolic_box(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z,
                                           double delta);

struct HyperbolicHit {
  OrderElement element;
  double u;
};

/// Every order element of norm n with u(z, theta(x) z) < delta, ordered by (x0, x1, x2, x3).
std::vector<HyperbolicHit> hyperbolic_hits(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z,
                                           double delta);

enum class CountingSetting { Sphere, Hyperbolic };

struct CountingProfile {
  CountingSetting setting = CountingSetting::Sphere;
  std::int64_t n = 1;
  std::variant<Vector3, HyperbolicPoint> base{Vector3(0, 0, 1)};
  std::vector<std::pair<double, std::int64_t>> rows;  // (delta, M), delta ascending
  /// Threshold semantics: "dist < delta" (sphere) or "u < delta" (hyperbolic).
  std::string convention;
};

CountingProfile sphere_profile(std::int64_t n, const Vector3& x, std::span<const double> deltas);
CountingProfile hyperbolic_profile(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z,
                                   std::span<const double> deltas);

enum class BoundModel {
  Constant,         // 1
  VanderKam,        // delta^{1/2} n^{1+e} + n^e for delta < 1/n, else n^{1/2+e} + delta^{2/3} n^{1+e}
  HyperbolicLemma,  // (delta + delta^{1/4}) n^{1+e} + n^e
};

double bound_model(BoundModel model, double delta, std::int64_t n, double eps);

struct BoundFit {
  BoundModel model = BoundModel::Constant;
  double eps = 0.05;
  double constant = 0.0;   // least-squares C in M ~ C * model
  double max_ratio = 0.0;  // max M / model
  double rms_residual = 0.0;
  std::size_t rows = 0;
};

/// Fits M against C * model over all rows of all profiles (>= 10 rows in total).
/// Throws ErrorKind::DegenerateProfile if every M is equal and the model is not Constant.
BoundFit fit_bound(std::span<const CountingProfile> profiles, BoundModel model, double eps = 0.05);
BoundFit fit_bound(const CountingProfile& profile, BoundModel model, double eps = 0.05);

}  // namespace heckelab
