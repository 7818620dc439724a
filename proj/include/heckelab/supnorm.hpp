#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "heckelab/harmonics.hpp"

namespace heckelab {

enum class FormDomain {
  Sphere,  // L2(S^2) against surface measure, total mass 4 pi
  Group,   // L2(SO(3)) against Haar probability measure
};

/// Coefficients of a degree-k form in the real harmonic basis, ||c|| = 1.
/// On the group the form of K-type l is f(g) = sqrt(2k+1) sum_m a_m conj(D^k_{m,l}(g)), a = U^T c,
/// so that l = 0 gives sqrt(4 pi) times the sphere form evaluated at g e_z.
struct FormCoefficients {
  int k = 0;
  int l = 0;
  Eigen::VectorXd c;
  FormDomain domain = FormDomain::Sphere;

  /// Throws ErrorKind::OutOfRange on a size mismatch or ||c|| != 1 (1e-9).
  static FormCoefficients sphere(int k, Eigen::VectorXd c);
  /// Also throws ErrorKind::OutOfRange when |l| > k.
  static FormCoefficients group(int k, int l, Eigen::VectorXd c);
};

/// Sphere forms only.
std::complex<double> evaluate_form(const FormCoefficients& f, const Vector3& x);
/// Group forms only.
std::complex<double> evaluate_form(const FormCoefficients& f, const EulerZYZ& g);
std::complex<double> evaluate_form(const FormCoefficients& f, const SU2Element& g);

/// Vertices of the frequency-f geodesic subdivision of an icosahedron with vertices at both poles:
/// 10 f^2 + 2 unit vectors, sorted lexicographically.
std::vector<Vector3> icosahedral_grid(int frequency);

struct SupNormResult {
  double value = 0.0;       // after polish
  double grid_value = 0.0;  // best raw grid value
  Vector3 point{0, 0, 1};   // sphere argmax
  EulerZYZ angles;          // group argmax (gamma = 0)
  std::size_t grid_points = 0;
};

/// Max |f| over a grid with roughly `resolution` samples per great circle, then deterministic coordinate
/// ascent from the best grid candidates with `polish_steps` step halvings.
/// Throws ErrorKind::UnderResolved if resolution < 4k.
SupNormResult sup_norm_estimate(const FormCoefficients& f, int resolution, int polish_steps);

/// Same search for every column of `vectors` (sphere forms of degree k sharing one grid).
/// OpenMP-parallel over grid chunks with a fixed reduction order.
std::vector<SupNormResult> sup_norms(int k, const Eigen::MatrixXd& vectors, int resolution, int polish_steps);

namespace reference {

/// Serial raw-grid maximum of |f| for each column, no polish.
std::vector<double> grid_max(int k, const Eigen::MatrixXd& vectors, int resolution);

}  // namespace reference

/// Mean of |f|^2 over the sphere grid for the given resolution.
double grid_mean_square(const FormCoefficients& f, int resolution);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::size_t samples = 0;
};

/// Least squares log(sup) = intercept + slope log(lambda).
/// Throws ErrorKind::InsufficientData for fewer than 5 samples, ErrorKind::DegenerateInput unless the
/// eigenvalues are distinct and positive.
ExponentFit exponent_fit(std::span<const std::pair<double, double>> samples);

}  // namespace heckelab
