#include <cmath>
#include <random>

#include <Eigen/LU>

#include "doctest.h"
#include "heckelab/counting.hpp"
#include "heckelab/error.hpp"

using namespace heckelab;

namespace {

std::int64_t naive_hyperbolic(const IndefAlgebra& alg, std::int64_t n, const HyperbolicPoint& z, double delta) {
  const auto B = 2 * static_cast<std::int64_t>(std::ceil(std::sqrt(n * (delta + 2.0))));
  std::int64_t c = 0;
  for (std::int64_t a0 = -B; a0 <= B; ++a0)
    for (std::int64_t a1 = -B; a1 <= B; ++a1)
      for (std::int64_t a2 = -B; a2 <= B; ++a2)
        for (std::int64_t a3 = -B; a3 <= B; ++a3) {
          const OrderElement e{alg, a0, a1, a2, a3};
          if (e.norm() == n && u_invariant(z, mobius(theta_embed(e), z)) < delta) ++c;
        }
  return c;
}

Eigen::Matrix2d random_sl2(std::mt19937_64& g) {
  std::normal_distribution<double> d;
  Eigen::Matrix2d m;
  do {
    m << d(g), d(g), d(g), d(g);
  } while (std::abs(m.determinant()) < 0.1);
  if (m.determinant() < 0) m.col(0) *= -1.0;
  return m / std::sqrt(m.determinant());
}

}  // namespace

TEST_CASE("u invariant examples") {
  const HyperbolicPoint i(0.0, 1.0);
  CHECK(u_invariant(i, i) == 0.0);
  const double t = std::log(2.0);
  CHECK(u_invariant(i, HyperbolicPoint(0.0, std::exp(t))) == doctest::Approx(0.5));
  CHECK(hyperbolic_distance(i, HyperbolicPoint(0.0, 2.0)) == doctest::Approx(t));
  CHECK_THROWS_AS(HyperbolicPoint(0.0, 0.0), Error);
  CHECK_THROWS_AS(HyperbolicPoint(1.0, -2.0), Error);
}

TEST_CASE("u(i, g i) = ||g||_F^2 - 2 on SL(2, R); u is SL(2, R)-invariant and symmetric") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> re(-2, 2), im(0.2, 3);
  const HyperbolicPoint i(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Matrix2d g = random_sl2(gen);
    worst = std::max(worst, std::abs(u_invariant(i, mobius(g, i)) - (g.squaredNorm() - 2.0)) / (1 + g.squaredNorm()));
  }
  CHECK(worst < 1e-10);
  for (int t = 0; t < 200; ++t) {
    const HyperbolicPoint z(re(gen), im(gen)), w(re(gen), im(gen));
    const Eigen::Matrix2d g = random_sl2(gen);
    const double u = u_invariant(z, w);
    CHECK(u >= 0.0);
    CHECK(u == doctest::Approx(u_invariant(w, z)));
    CHECK(u_invariant(mobius(g, z), mobius(g, w)) == doctest::Approx(u).epsilon(1e-8));
  }
}

TEST_CASE("u and hyperbolic distance are comparable on a compact set") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> re(-1, 1), im(0.5, 2);
  double lo = 1e9, hi = 0.0;
  for (int t = 0; t < 2000; ++t) {
    const HyperbolicPoint z(re(gen), im(gen)), w(re(gen), im(gen));
    const double u = u_invariant(z, w), d = hyperbolic_distance(z, w);
    if (u < 1e-12) continue;
    lo = std::min(lo, d * d / u);
    hi = std::max(hi, d * d / u);
  }
  CHECK(lo > 0.1);
  CHECK(hi <= 1.0 + 1e-12);
}

TEST_CASE("count_sphere examples") {
  const Vector3 x = unit_vector(0.9, 0.4);
  for (std::int64_t n : {5, 13, 25}) CHECK(count_sphere(n, x, 4.0) == static_cast<std::int64_t>(enumerate_Rn(n).size()));
  for (double d : {1e-9, 0.5, 3.0}) CHECK(count_sphere(1, x, d) == 2);
  // north pole, tiny delta: brute-force filter over R(5)
  std::int64_t brute = 0;
  for (const Quaternion& q : enumerate_Rn(5))
    if (std::acos(std::clamp((rotation_of(q) * Vector3::UnitZ()).z(), -1.0, 1.0)) < 1e-6) ++brute;
  CHECK(count_sphere(5, Vector3::UnitZ(), 1e-6) == brute);
  CHECK(brute == 4);  // +-(1 +- 2k)
  CHECK_THROWS_AS(count_sphere(7, x, 1.0), Error);
}

TEST_CASE("count_sphere is even and monotone") {
  const Vector3 x = unit_vector(2.0, 5.0);
  for (std::int64_t n : {5, 29, 65, 101}) {
    std::int64_t prev = 0;
    for (double d = 0.0; d <= 3.2; d += 0.1) {
      const std::int64_t c = count_sphere(n, x, d);
      CHECK(c % 2 == 0);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("count_hyperbolic matches an oversized box") {
  const IndefAlgebra alg(2, 3);
  const HyperbolicPoint i(0.0, 1.0);
  for (std::int64_t n = 1; n <= 30; ++n) CHECK(count_hyperbolic(alg, n, i, 0.5) == naive_hyperbolic(alg, n, i, 0.5));
  const HyperbolicPoint z(0.31, 1.7);
  for (std::int64_t n : {1, 2, 6, 11}) CHECK(count_hyperbolic(alg, n, z, 1.3) == naive_hyperbolic(alg, n, z, 1.3));
}

TEST_CASE("count_hyperbolic: delta = 0, monotone, overflow signalled") {
  const IndefAlgebra alg(2, 3);
  const HyperbolicPoint z(0.123, 0.987);
  CHECK(count_hyperbolic(alg, 7, z, 0.0) == 0);
  std::int64_t prev = 0;
  for (double d : {0.1, 0.5, 1.0, 2.0, 4.0}) {
    const auto c = count_hyperbolic(alg, 7, z, d);
    CHECK(c >= prev);
    prev = c;
  }
  try {
    count_hyperbolic(alg, 5, HyperbolicPoint(0.0, 1e-9), 1.0);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EnumerationBoundOverflow);
  }
}

TEST_CASE("profiles and bound fits") {
  std::vector<double> deltas;
  for (int i = 1; i <= 12; ++i) deltas.push_back(0.25 * i);
  const CountingProfile one = sphere_profile(1, Vector3::UnitZ(), deltas);
  const BoundFit c = fit_bound(one, BoundModel::Constant);
  CHECK(c.constant == doctest::Approx(2.0));
  CHECK(c.max_ratio == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_bound(one, BoundModel::VanderKam), Error);

  const CountingProfile p = sphere_profile(29, unit_vector(0.4, 0.2), deltas);
  CHECK(p.rows.size() == deltas.size());
  CHECK(p.rows.back().second == 60);
  for (std::size_t r = 1; r < p.rows.size(); ++r) CHECK(p.rows[r].second >= p.rows[r - 1].second);
  const BoundFit v = fit_bound(p, BoundModel::VanderKam);
  CHECK(std::isfinite(v.max_ratio));
  CHECK(v.rows == deltas.size());

  const CountingProfile h = hyperbolic_profile(IndefAlgebra(2, 3), 12, HyperbolicPoint(0, 1), deltas);
  for (const auto& [d, m] : h.rows) CHECK(m == count_hyperbolic(IndefAlgebra(2, 3), 12, HyperbolicPoint(0, 1), d));
  CHECK(h.convention == "u(z, alpha z) < delta");

  std::vector<double> few = {0.1, 0.2};
  CHECK_THROWS_AS(fit_bound(sphere_profile(5, Vector3::UnitZ(), few), BoundModel::Constant), Error);
}

TEST_CASE("bound models") {
  CHECK(bound_model(BoundModel::Constant, 0.3, 17, 0.05) == 1.0);
  CHECK(bound_model(BoundModel::VanderKam, 0.01, 5, 0.0) == doctest::Approx(0.1 * 5 + 1));
  CHECK(bound_model(BoundModel::VanderKam, 1.0, 4, 0.0) == doctest::Approx(2.0 + 4.0));
  CHECK(bound_model(BoundModel::HyperbolicLemma, 1.0, 10, 0.0) == doctest::Approx(2.0 * 10 + 1));
}
