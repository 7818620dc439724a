#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heckelab/error.hpp"
#include "heckelab/window.hpp"

using namespace heckelab;

TEST_CASE("window is even, nonnegative and has unit mass") {
  const SpectralWindow w;
  double mass = 0.0;
  const double h = 1.0 / 256.0;
  for (double t = -w.span(); t <= w.span(); t += h) {
    CHECK(w(t) >= 0.0);
    mass += h * w(t);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
  for (double t : {0.1, 0.77, 3.0, 12.5, 40.0}) CHECK(w(t) == doctest::Approx(w(-t)).epsilon(1e-12));
  CHECK(w.fourier(0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("window is positive on [-1, 1] and its transform is compactly supported") {
  const SpectralWindow w;
  for (double t = -1.0; t <= 1.0; t += 0.05) CHECK(w(t) > 0.3 * w.peak());
  CHECK(w(1.0) / w.peak() == doctest::Approx(0.668967).epsilon(1e-5));
  CHECK(w.fourier(0.159) == doctest::Approx(0.583047).epsilon(1e-5));
  CHECK(w.fourier(0.5) == 0.0);
  CHECK(w.fourier(0.7) == 0.0);
  CHECK(w.fourier(0.499) > 0.0);
  // narrower window width gives a wider rho
  const SpectralWindow half(0.5);
  CHECK(half.fourier(0.25) == 0.0);
  CHECK(half.tail_cutoff() > w.tail_cutoff());
}

TEST_CASE("interpolated window agrees with direct quadrature") {
  const SpectralWindow w;
  for (double t : {0.0, 0.013, 0.5, 1.37, 4.2, 9.99, 25.0, 60.0})
    CHECK(std::abs(w(t) - w.exact(t)) <= 1e-9 * w.peak());
}

TEST_CASE("tail cutoff marks 1e-14 relative decay") {
  const SpectralWindow w;
  CHECK(w.tail_cutoff() > 10.0);
  CHECK(w.span() > w.tail_cutoff());
  for (double t = w.tail_cutoff(); t < w.span(); t += 0.5) CHECK(w(t) < 1e-14 * w.peak());
  CHECK(w(w.span() + 1.0) == 0.0);
}

TEST_CASE("window width must lie in (0, 1]") {
  CHECK_THROWS_AS(SpectralWindow(0.0), Error);
  CHECK_THROWS_AS(SpectralWindow(1.5), Error);
  CHECK_THROWS_AS(SpectralWindow(-1.0), Error);
}
