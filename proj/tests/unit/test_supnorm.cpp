#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "heckelab/error.hpp"
#include "heckelab/hecke.hpp"
#include "heckelab/supnorm.hpp"

using namespace heckelab;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd random_unit_coeffs(int k, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  Eigen::VectorXd c(2 * k + 1);
  for (auto& v : c) v = d(g);
  return c.normalized();
}

Eigen::VectorXd zonal(int k) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * k + 1);
  c(k) = 1.0;
  return c;
}

// Halton sequence mapped to the sphere by the area-preserving cylinder projection.
double halton(int i, int base) {
  double f = 1.0, r = 0.0;
  for (; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

}  // namespace

TEST_CASE("form construction validates its inputs") {
  CHECK_THROWS_AS(FormCoefficients::sphere(2, Eigen::VectorXd::Ones(5)), Error);
  CHECK_THROWS_AS(FormCoefficients::sphere(2, zonal(3)), Error);
  CHECK_THROWS_AS(FormCoefficients::group(2, 3, zonal(2)), Error);
  CHECK_NOTHROW(FormCoefficients::group(2, -2, zonal(2)));
  const auto g = FormCoefficients::group(2, 0, zonal(2));
  CHECK_THROWS_AS(evaluate_form(g, Vector3::UnitZ()), Error);
  CHECK_THROWS_AS(evaluate_form(FormCoefficients::sphere(2, zonal(2)), EulerZYZ{}), Error);
}

TEST_CASE("evaluate_form examples") {
  for (int k : {0, 3, 20}) {
    const auto f = FormCoefficients::sphere(k, zonal(k));
    CHECK(evaluate_form(f, Vector3::UnitZ()).real() == doctest::Approx(std::sqrt((2 * k + 1) / (4 * kPi))));
  }
  const auto c0 = FormCoefficients::sphere(0, zonal(0));
  CHECK(evaluate_form(c0, unit_vector(1.0, 2.0)).real() == doctest::Approx(0.5 / std::sqrt(kPi)));
}

TEST_CASE("group forms: l = 0 lifts the sphere form; right K-action is a phase") {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 7;
  const Eigen::VectorXd c = random_unit_coeffs(k, g);
  const auto fs = FormCoefficients::sphere(k, c);
  const auto f0 = FormCoefficients::group(k, 0, c);
  for (int t = 0; t < 20; ++t) {
    const EulerZYZ e{2 * kPi * u(g), kPi * u(g), 2 * kPi * u(g)};
    const Vector3 x = rotation_of(e) * Vector3::UnitZ();
    CHECK(std::abs(evaluate_form(f0, e) - std::sqrt(4 * kPi) * evaluate_form(fs, x)) < 1e-11);
  }
  for (int l : {-3, 2, 7}) {
    const auto f = FormCoefficients::group(k, l, c);
    for (int t = 0; t < 100; ++t) {
      const EulerZYZ e{2 * kPi * u(g), kPi * u(g), 2 * kPi * u(g)};
      const double th = 2 * kPi * u(g);
      const std::complex<double> a = evaluate_form(f, e), b = evaluate_form(f, EulerZYZ{e.alpha, e.beta, e.gamma + th});
      CHECK(std::abs(std::abs(a) - std::abs(b)) < 1e-11);
      CHECK(std::abs(b - a * std::polar(1.0, l * th)) < 1e-11);
    }
  }
}

TEST_CASE("Hecke eigenvectors stay eigenfunctions on the group for every K-type") {
  const int k = 6;
  const HeckeMaassBasis b = joint_eigenbasis(k, std::vector<std::int64_t>{5});
  const auto R = enumerate_Rn(5);
  std::mt19937_64 g(9);
  std::normal_distribution<double> n;
  for (int l : {0, 2, -5}) {
    const auto f = FormCoefficients::group(k, l, b.vectors.col(4));
    for (int t = 0; t < 5; ++t) {
      Eigen::Vector4d v(n(g), n(g), n(g), n(g));
      v.normalize();
      const SU2Element hn{v(0), v(1), v(2), v(3)};
      std::complex<double> Tf = 0.0;
      for (const Quaternion& q : R) Tf += 0.5 * evaluate_form(f, SU2Element::from(q) * hn);
      CHECK(std::abs(Tf - b.lambda(4, 5) * evaluate_form(f, hn)) < 1e-9);
    }
  }
}

TEST_CASE("L2 normalization by quasi-Monte Carlo") {
  std::mt19937_64 g(12);
  const auto f = FormCoefficients::sphere(9, random_unit_coeffs(9, g));
  const int N = 100000;
  double s = 0.0;
  for (int i = 1; i <= N; ++i) {
    const double z = 2 * halton(i, 2) - 1, ph = 2 * kPi * halton(i, 3);
    s += std::norm(evaluate_form(f, unit_vector(std::acos(z), ph)));
  }
  CHECK(4 * kPi * s / N == doctest::Approx(1.0).epsilon(0.01));
  CHECK(4 * kPi * grid_mean_square(f, 80) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("icosahedral grid") {
  for (int f : {1, 2, 5, 16}) {
    const auto grid = icosahedral_grid(f);
    CHECK(grid.size() == static_cast<std::size_t>(10 * f * f + 2));
    for (const Vector3& x : grid) CHECK(x.norm() == doctest::Approx(1.0));
  }
  const auto grid = icosahedral_grid(3);
  CHECK(std::find(grid.begin(), grid.end(), Vector3::UnitZ()) != grid.end());
  CHECK_THROWS_AS(icosahedral_grid(0), Error);
}

TEST_CASE("sup norm examples") {
  const auto z20 = FormCoefficients::sphere(20, zonal(20));
  CHECK(sup_norm_estimate(z20, 80, 20).value == doctest::Approx(std::sqrt(41 / (4 * kPi))).epsilon(1e-4));
  const auto c0 = FormCoefficients::sphere(0, zonal(0));
  CHECK(sup_norm_estimate(c0, 4, 5).value == doctest::Approx(0.5 / std::sqrt(kPi)).epsilon(1e-15));
  CHECK_THROWS_AS(sup_norm_estimate(z20, 79, 5), Error);
  try {
    sup_norm_estimate(z20, 40, 5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnderResolved);
  }
}

TEST_CASE("polish only improves on the grid, monotonically in the step count") {
  std::mt19937_64 g(2);
  const auto f = FormCoefficients::sphere(20, random_unit_coeffs(20, g));
  const double raw = reference::grid_max(20, f.c, 80)[0];
  double prev = 0.0;
  for (int steps : {0, 1, 3, 8, 20}) {
    const SupNormResult r = sup_norm_estimate(f, 80, steps);
    CHECK(r.grid_value == doctest::Approx(raw).epsilon(1e-14));
    CHECK(r.value >= raw);
    CHECK(r.value >= prev);
    CHECK(std::abs(evaluate_form(f, r.point)) == doctest::Approx(r.value).epsilon(1e-12));
    prev = r.value;
  }
}

TEST_CASE("sup norm is rotation invariant") {
  std::mt19937_64 g(7);
  const RotationMatrix R = rotation_of(Quaternion{3, 1, -2, 5});
  for (int k : {5, 12}) {
    const Eigen::VectorXd c = random_unit_coeffs(k, g);
    const Eigen::VectorXd rc = rotation_rep_matrix(k, R) * c;
    const double a = sup_norm_estimate(FormCoefficients::sphere(k, c), 8 * k, 40).value;
    const double b = sup_norm_estimate(FormCoefficients::sphere(k, rc), 8 * k, 40).value;
    CHECK(std::abs(a - b) <= 1e-6 * a);
  }
}

TEST_CASE("batched sup norms match single-form estimates; parallel grid matches serial") {
  const HeckeMaassBasis b = joint_eigenbasis(9, std::vector<std::int64_t>{5, 13});
  const auto batch = sup_norms(9, b.vectors, 40, 10);
  const auto raw = reference::grid_max(9, b.vectors, 40);
  for (int j = 0; j < b.dim(); ++j) {
    CHECK(batch[j].grid_value == doctest::Approx(raw[j]).epsilon(1e-14));
    CHECK(batch[j].value == sup_norm_estimate(FormCoefficients::sphere(9, b.vectors.col(j)), 40, 10).value);
  }
}

TEST_CASE("group sup norm of the l = 0 zonal lift") {
  const int k = 10;
  const auto f = FormCoefficients::group(k, 0, zonal(k));
  CHECK(sup_norm_estimate(f, 4 * k, 20).value == doctest::Approx(std::sqrt(2.0 * k + 1.0)).epsilon(1e-6));
}

TEST_CASE("exponent fit") {
  std::vector<std::pair<double, double>> s;
  for (int k = 10; k <= 60; k += 10) s.emplace_back(k * (k + 1.0), 3.0 * std::pow(k * (k + 1.0), 0.3));
  const ExponentFit f = exponent_fit(s);
  CHECK(f.slope == doctest::Approx(0.3));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.stderr_slope < 1e-10);
  CHECK_THROWS_AS(exponent_fit(std::span(s).first(4)), Error);
  std::vector<std::pair<double, double>> flat(6, {2.0, 1.0});
  CHECK_THROWS_AS(exponent_fit(flat), Error);
}
