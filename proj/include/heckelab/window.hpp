#pragma once

#include <vector>

namespace heckelab {

/// Nonnegative Schwartz window rho = c |check(eta)|^2, eta the bump exp(-1/(1 - (4 xi / s)^2))
/// on (-s/4, s/4), so that rho-hat = c (eta * eta) is supported in (-s/2, s/2) and
/// rho-hat(0) = int rho = 1. Fourier convention: f-hat(xi) = int f(t) e^{-2 pi i t xi} dt.
///
/// rho is tabulated on a uniform grid (spacing 1/64) out to beyond the 1e-14 tail cutoff and
/// evaluated by cubic Hermite interpolation with exact derivatives.
class SpectralWindow {
 public:
  /// Throws ErrorKind::OutOfRange unless 0 < support_half_width <= 1.
  explicit SpectralWindow(double support_half_width = 1.0);

  double support_half_width() const noexcept { return width_; }
  double normalization() const noexcept { return c_; }

  /// rho(t); zero beyond the tabulated span.
  double operator()(double t) const;
  /// rho(t) by direct quadrature, no interpolation.
  double exact(double t) const;
  /// rho-hat(xi) by quadrature of c (eta * eta)(xi).
  double fourier(double xi) const;

  /// Smallest grid point T with rho(t) < 1e-14 rho(0) for all tabulated |t| >= T.
  double tail_cutoff() const noexcept { return tail_; }
  double span() const noexcept { return span_; }
  double peak() const noexcept { return values_.front(); }

 private:
  double bump(double xi) const;
  void transform(double t, double& value, double& deriv) const;

  double width_;
  double half_support_;  // support of eta: (-width/4, width/4)
  double c_ = 1.0;
  double tail_ = 0.0;
  double span_ = 0.0;
  double step_ = 1.0 / 64.0;
  std::vector<double> nodes_, weights_;  // half-line trapezoid nodes xi > 0 with eta(xi) * dxi
  std::vector<double> values_, derivs_;
};

}  // namespace heckelab
