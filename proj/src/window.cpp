#include "heckelab/window.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "heckelab/error.hpp"

namespace heckelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTailRatio = 1e-14;

}  // namespace

double SpectralWindow::bump(double xi) const {
  const double u = xi / half_support_;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

SpectralWindow::SpectralWindow(double support_half_width) : width_(support_half_width) {
  if (!(support_half_width > 0.0 && support_half_width <= 1.0))
    throw Error(ErrorKind::OutOfRange, "window support half-width must lie in (0, 1], got " +
                                           std::to_string(support_half_width));
  half_support_ = width_ / 4.0;

  // Trapezoid rule: eta is flat to all orders at the endpoints, so it converges spectrally.
  // Double the node count until the L2 mass stabilizes.
  auto mass = [&](int nodes) {
    const double h = half_support_ / nodes;
    double s = 0.5 * bump(0.0) * bump(0.0);
    for (int i = 1; i < nodes; ++i) s += bump(i * h) * bump(i * h);
    return 2.0 * s * h;
  };
  int nodes = 256;
  double prev = mass(nodes);
  for (;;) {
    const double cur = mass(2 * nodes);
    nodes *= 2;
    if (std::abs(cur - prev) <= 1e-16 * cur || nodes >= (1 << 16)) {
      prev = cur;
      break;
    }
    prev = cur;
  }
  // rho = c |eta-check|^2 integrates to c int eta^2 (Plancherel).
  c_ = 1.0 / prev;

  // The t-grid needs the oscillation 2 pi xi t resolved out to t ~ 200 / width.
  nodes = std::max(nodes, 2048);
  const double h = half_support_ / nodes;
  nodes_.clear();
  weights_.clear();
  nodes_.push_back(0.0);
  weights_.push_back(0.5 * bump(0.0) * h * 2.0);
  for (int i = 1; i < nodes; ++i) {
    nodes_.push_back(i * h);
    weights_.push_back(2.0 * bump(i * h) * h);
  }

  // Tabulate until the tail has stayed below the cutoff for a good stretch.
  const double hard_max = 600.0 / width_;
  double last_above = 0.0;
  double peak = 0.0;
  for (int i = 0;; ++i) {
    const double t = i * step_;
    double v, d;
    transform(t, v, d);
    const double rho = c_ * v * v;
    values_.push_back(rho);
    derivs_.push_back(2.0 * c_ * v * d);
    if (i == 0) peak = rho;
    if (rho >= kTailRatio * peak) last_above = t;
    if (t > 1.25 * last_above + 16.0 / width_ || t >= hard_max) break;
  }
  tail_ = last_above + step_;
  span_ = (static_cast<double>(values_.size()) - 1.0) * step_;
}

void SpectralWindow::transform(double t, double& value, double& deriv) const {
  // eta-check(t) = int eta(xi) cos(2 pi xi t) dxi and its t-derivative
  double v = 0.0, d = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double arg = kTwoPi * nodes_[i] * t;
    v += weights_[i] * std::cos(arg);
    d -= weights_[i] * kTwoPi * nodes_[i] * std::sin(arg);
  }
  value = v;
  deriv = d;
}

double SpectralWindow::exact(double t) const {
  double v, d;
  transform(std::abs(t), v, d);
  return c_ * v * v;
}

double SpectralWindow::operator()(double t) const {
  const double a = std::abs(t);
  if (a >= span_) return 0.0;
  const double pos = a / step_;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values_.size()) return values_.back();
  const double s = pos - static_cast<double>(i);
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double r = h00 * values_[i] + h10 * step_ * derivs_[i] + h01 * values_[i + 1] + h11 * step_ * derivs_[i + 1];
  return r > 0.0 ? r : 0.0;
}

double SpectralWindow::fourier(double xi) const {
  const double a = std::abs(xi);
  if (a >= 2.0 * half_support_) return 0.0;
  // c int eta(s) eta(a - s) ds over the overlap [a - h, h]
  const double lo = a - half_support_, hi = half_support_;
  const int n = 4096;
  const double step = (hi - lo) / n;
  double s = 0.0;
  for (int i = 1; i < n; ++i) {
    const double x = lo + i * step;
    s += bump(x) * bump(a - x);
  }
  return c_ * s * step;
}

}  // namespace heckelab
