// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "heckelab/amplifier.hpp"
#include "heckelab/cli.hpp"
#include "heckelab/counting.hpp"
#include "heckelab/hecke.hpp"
#include "heckelab/kernel.hpp"
#include "heckelab/linalg.hpp"
#include "heckelab/supnorm.hpp"

using namespace heckelab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(t0);
  const bool in_time = limit_seconds <= 0 || t < limit_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::string timing = fmt::format("{:.1f}s", t);
  if (limit_seconds > 0) timing += fmt::format(" of {:.0f}s", limit_seconds);
  std::printf("criterion %2d: %s  %s | %s | %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str(),
              timing.c_str());
  std::fflush(stdout);
}

Vector3 random_point(SeededUniform& u) {
  return unit_vector(std::acos(2.0 * u.next() - 1.0), 2.0 * std::numbers::pi * u.next());
}

std::vector<std::int64_t> primes_1mod4(std::int64_t hi) { return admissible_primes(hi); }

}  // namespace

int main() {
  const SpectralWindow window;

  report(1, "enumeration oracle, n <= 500", 10.0, [] {
    // one naive pass over the box |a_i| <= 22 tallies every norm up to 500
    std::vector<std::size_t> naive(501, 0);
    for (int a0 = -23; a0 <= 23; ++a0)
      for (int a1 = -23; a1 <= 23; ++a1)
        for (int a2 = -23; a2 <= 23; ++a2)
          for (int a3 = -23; a3 <= 23; ++a3) {
            const int n = a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3;
            if (n <= 500 && (a0 & 1) && !(a1 & 1) && !(a2 & 1) && !(a3 & 1)) ++naive[n];
          }
    int mismatches = 0;
    for (int n = 1; n <= 500; ++n)
      if (enumerate_Rn(n).size() != naive[n]) ++mismatches;
    const std::size_t r1 = enumerate_Rn(1).size(), r5 = enumerate_Rn(5).size();
    return Outcome{mismatches == 0 && r1 == 2 && r5 == 12,
                   fmt::format("mismatches {}, |R(1)| = {}, |R(5)| = {}", mismatches, r1, r5)};
  });

  std::map<std::int64_t, std::vector<Eigen::MatrixXd>> T;
  report(2, "composition law, k <= 30", 60.0, [&] {
    for (std::int64_t n : {1, 5, 13, 17, 25, 29, 65, 125, 169}) T[n] = hecke_matrices(n, 30);
    double worst = 0.0;
    const std::vector<std::pair<std::int64_t, std::int64_t>> pairs = {{5, 5}, {5, 13}, {13, 13}, {5, 25}};
    for (int k = 0; k <= 30; ++k) {
      for (const auto& [r, s] : pairs) {
        Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * k + 1, 2 * k + 1);
        const std::int64_t g = std::gcd(r, s);
        for (std::int64_t d = 1; d <= g; ++d)
          if (g % d == 0) rhs += static_cast<double>(d) * T.at(r * s / (d * d))[k];
        worst = std::max(worst, (T.at(r)[k] * T.at(s)[k] - rhs).norm());
      }
    }
    return Outcome{worst <= 1e-8, fmt::format("max ||T_r T_s - sum d T_(rs/d^2)||_F = {:.3g}", worst)};
  });

  report(3, "commutation and symmetry, k <= 30", 0.0, [&] {
    double comm = 0.0, asym = 0.0;
    for (int k = 0; k <= 30; ++k) {
      const Eigen::MatrixXd &A = T.at(5)[k], &B = T.at(13)[k];
      comm = std::max(comm, (A * B - B * A).norm() / (A.norm() * B.norm()));
      for (std::int64_t n : {5, 13, 17, 25, 29})
        asym = std::max(asym, (T.at(n)[k] - T.at(n)[k].transpose()).cwiseAbs().maxCoeff());
    }
    return Outcome{comm <= 1e-8 && asym <= 1e-10,
                   fmt::format("||[T5,T13]|| / (||T5|| ||T13||) = {:.3g}, max asymmetry = {:.3g}", comm, asym)};
  });

  report(4, "Deligne bound, p in {5,13,17,29}, 1 <= k <= 30", 0.0, [&] {
    double worst = 0.0;
    for (std::int64_t p : {5, 13, 17, 29})
      for (int k = 1; k <= 30; ++k) {
        const SymmetricEigen e = symmetric_eigen(T.at(p)[k] / std::sqrt(static_cast<double>(p)));
        worst = std::max(worst, e.values.cwiseAbs().maxCoeff());
      }
    return Outcome{worst <= 2.0 + 1e-6, fmt::format("max |eigenvalue of T_p / sqrt p| = {:.12f}", worst)};
  });
  T.clear();

  // Eigendata shared by criteria 5 and 6.
  const std::vector<std::int64_t> levels = {5, 13, 25, 169};
  const int kmax_needed = std::max(window_degrees(40.0, window).kmax, window_degrees(20.0, window).kmax);
  const auto t_spec = Clock::now();
  std::unique_ptr<HeckeSpectrum> spectrum;
  std::string spectrum_error;
  try {
    spectrum = std::make_unique<HeckeSpectrum>(levels, kmax_needed);
  } catch (const std::exception& e) {
    spectrum_error = e.what();
  }
  const double spectrum_seconds = seconds_since(t_spec);

  report(5, "Hecke relation eta(p)^2 - eta(p^2) = 1, p in {5,13}", 0.0, [&] {
    if (!spectrum) return Outcome{false, "eigendata failed: " + spectrum_error};
    double worst = 0.0;
    std::size_t forms = 0;
    for (int k = 0; k <= spectrum->kmax(); ++k) {
      const HeckeMaassBasis& b = spectrum->degree(k);
      worst = std::max({worst, relation_residual(b, 5), relation_residual(b, 13)});
      forms += static_cast<std::size_t>(b.dim());
    }
    return Outcome{worst <= 1e-6, fmt::format("max residual {:.3g} over {} forms (k <= {})", worst, forms, spectrum->kmax())};
  });

  report(6, "pre-trace amplification oracle, N = 200, mu in {20,40}", 120.0, [&] {
    if (!spectrum) return Outcome{false, "eigendata failed: " + spectrum_error};
    SeededUniform u(kDefaultSeed);
    double worst = 0.0, worst_imag = 0.0;
    for (double mu : {20.0, 40.0}) {
      const int k0 = static_cast<int>(mu);
      const AmplifierVector z = build_amplifier(spectrum->degree(k0), k0, 200);
      for (int t = 0; t < 5; ++t) {
        const Vector3 x = random_point(u);
        const double s = amplified_sum_spectral(x, mu, z, window, *spectrum);
        const GeometricSum g = amplified_sum_geometric_terms(x, mu, z, window);
        worst = std::max(worst, std::abs(s - g.value) / std::abs(s));
        worst_imag = std::max(worst_imag, std::abs(g.imaginary) / std::abs(s));
      }
    }
    return Outcome{worst <= 1e-6, fmt::format("max relative gap {:.3g}, max |imag| / value {:.3g}, eigendata k <= {} took "
                                              "{:.1f}s (included)",
                                              worst, worst_imag, spectrum->kmax(), spectrum_seconds)};
  });
  spectrum.reset();

  report(7, "kernel asymptotics", 0.0, [&] {
    double lo = 1e300, hi = 0.0;
    for (double mu = 40.0; mu <= 80.0; mu += 0.25) {
      const double r = kernel_diag(mu, window) / mu;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const double diag_var = hi / lo - 1.0;
    // off-diagonal: local envelope of |K| sqrt(theta) over one oscillation period 2 pi / mu
    const double mu = 80.0, period = 2.0 * std::numbers::pi / mu;
    std::vector<double> th, val;
    for (double t = 5.0 / mu; t <= 1.0 + period; t += period / 64.0) {
      th.push_back(t);
      val.push_back(std::abs(kernel_offdiag(mu, t, window)) * std::sqrt(t));
    }
    double emin = 1e300, emax = 0.0;
    for (std::size_t i = 0; i < th.size() && th[i] <= 1.0; ++i) {
      double e = 0.0;
      for (std::size_t j = i; j < th.size() && th[j] <= th[i] + period; ++j) e = std::max(e, val[j]);
      emin = std::min(emin, e);
      emax = std::max(emax, e);
    }
    const double off_ratio = emax / emin;
    // Hecke kernel shape: C fitted on mu in [20, 50], then checked on (50, 80]
    SeededUniform u(kDefaultSeed ^ 7);
    std::vector<Vector3> xs;
    for (int i = 0; i < 5; ++i) xs.push_back(random_point(u));
    double c_fit = 0.0, c_all = 0.0;
    for (std::int64_t n : {5, 13, 25, 29})
      for (double m = 20.0; m <= 80.0; m += 5.0)
        for (const Vector3& x : xs) {
          const double model = m + static_cast<double>(n) * std::sqrt(m) * std::log(m);
          const double ratio = std::abs(hecke_kernel_diag(n, m, x, window)) / model;
          if (m <= 50.0) c_fit = std::max(c_fit, ratio);
          c_all = std::max(c_all, ratio);
        }
    const bool pass = diag_var <= 0.15 && off_ratio <= 2.0 && c_all <= c_fit;
    return Outcome{pass, fmt::format("diag/mu spread {:.3g}; offdiag envelope max/min {:.3f}; Hecke C fitted on "
                                     "[20,50] = {:.4g}, max over [20,80] = {:.4g}",
                                     diag_var, off_ratio, c_fit, c_all)};
  });

  report(8, "counting bound shapes and hyperbolic oracle", 300.0, [] {
    const double eps = 0.05;
    // sphere: primes n = 1 mod 4 up to 101, delta log-spaced over [1e-3, pi]
    std::vector<double> sd;
    for (int i = 0; i < 40; ++i) sd.push_back(1e-3 * std::pow(std::numbers::pi / 1e-3, i / 39.0));
    SeededUniform u(kDefaultSeed ^ 11);
    std::vector<Vector3> xs = {Vector3::UnitZ(), random_point(u), random_point(u)};
    std::vector<CountingProfile> sphere_small, sphere_all;
    for (std::int64_t n : primes_1mod4(101))
      for (const Vector3& x : xs) {
        CountingProfile p = sphere_profile(n, x, sd);
        if (n <= 50) sphere_small.push_back(p);
        sphere_all.push_back(std::move(p));
      }
    const BoundFit vs = fit_bound(sphere_small, BoundModel::VanderKam, eps);
    const BoundFit va = fit_bound(sphere_all, BoundModel::VanderKam, eps);
    // hyperbolic: all n <= 100 at z = i, delta log-spaced over [1e-2, 4]
    const IndefAlgebra alg(2, 3);
    const HyperbolicPoint i(0.0, 1.0);
    std::vector<double> hd;
    for (int k = 0; k < 30; ++k) hd.push_back(1e-2 * std::pow(400.0, k / 29.0));
    std::vector<CountingProfile> hyp_small, hyp_all;
    for (std::int64_t n = 1; n <= 100; ++n) {
      CountingProfile p = hyperbolic_profile(alg, n, i, hd);
      if (n <= 50) hyp_small.push_back(p);
      hyp_all.push_back(std::move(p));
    }
    const BoundFit hs = fit_bound(hyp_small, BoundModel::HyperbolicLemma, eps);
    const BoundFit ha = fit_bound(hyp_all, BoundModel::HyperbolicLemma, eps);
    // oracle: oversized box |x_i| <= 2 ceil(sqrt(n (delta + 2))), delta = 0.5
    int mismatches = 0;
    for (std::int64_t n = 1; n <= 50; ++n) {
      const auto B = 2 * static_cast<std::int64_t>(std::ceil(std::sqrt(n * 2.5)));
      std::int64_t naive = 0;
      for (std::int64_t a0 = -B; a0 <= B; ++a0)
        for (std::int64_t a1 = -B; a1 <= B; ++a1)
          for (std::int64_t a2 = -B; a2 <= B; ++a2)
            for (std::int64_t a3 = -B; a3 <= B; ++a3) {
              if (a0 * a0 - 2 * a1 * a1 - 3 * a2 * a2 + 6 * a3 * a3 != n) continue;
              const OrderElement e{alg, a0, a1, a2, a3};
              if (u_invariant(i, mobius(theta_embed(e), i)) < 0.5) ++naive;
            }
      if (naive != count_hyperbolic(alg, n, i, 0.5)) ++mismatches;
    }
    const double sphere_change = va.max_ratio / vs.max_ratio, hyp_change = ha.max_ratio / hs.max_ratio;
    auto stable = [](double r) { return std::isfinite(r) && r < 2.0 && r > 0.5; };
    const bool pass = stable(sphere_change) && stable(hyp_change) && mismatches == 0;
    return Outcome{pass, fmt::format("sphere max M/model {:.4g} (n<=50) -> {:.4g} (n<=101); hyperbolic {:.4g} (n<=50) "
                                     "-> {:.4g} (n<=100); oracle mismatches {}",
                                     vs.max_ratio, va.max_ratio, hs.max_ratio, ha.max_ratio, mismatches)};
  });

  report(9, "sup-norm contrast, k in [10,60]", 600.0, [] {
    std::vector<std::pair<double, double>> zonal, hecke;
    const std::vector<std::int64_t> lv = {5, 13};
    for (int k = 10; k <= 60; ++k) {
      const double lambda = k * (k + 1.0);
      Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * k + 1);
      c(k) = 1.0;
      zonal.emplace_back(lambda, sup_norm_estimate(FormCoefficients::sphere(k, c), 8 * k, 30).value);
      const HeckeMaassBasis b = joint_eigenbasis(k, lv);
      double best = 0.0;
      for (const SupNormResult& r : sup_norms(k, b.vectors, 8 * k, 30)) best = std::max(best, r.value);
      hecke.emplace_back(lambda, best);
    }
    const ExponentFit fz = exponent_fit(zonal), fh = exponent_fit(hecke);
    const bool pass = std::abs(fz.slope - 0.25) <= 0.02 && fh.slope <= 0.225;
    return Outcome{pass, fmt::format("zonal slope {:.4f} +- {:.4f}; Hecke-Maass (max over basis) slope {:.4f} +- {:.4f} "
                                     "(threshold 0.225, asymptotic target 5/24 = {:.4f})",
                                     fz.slope, fz.stderr_slope, fh.slope, fh.stderr_slope, 5.0 / 24.0)};
  });

  report(10, "selfcheck determinism", 0.0, [] {
    const auto dir = std::filesystem::temp_directory_path() / "heckelab_acceptance";
    std::filesystem::create_directories(dir);
    const auto a = dir / "selfcheck_a.txt", b = dir / "selfcheck_b.txt";
    std::ostringstream out, err;
    const int ca = cli::dispatch({"--seed", "2024", "selfcheck", "--out", a.string()}, out, err);
    const int cb = cli::dispatch({"--seed", "2024", "selfcheck", "--out", b.string()}, out, err);
    auto slurp = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    const std::string ra = slurp(a), rb = slurp(b);
    const bool same = !ra.empty() && ra == rb;
    return Outcome{same && ca == 0 && cb == 0,
                   fmt::format("reports {} ({} bytes), exit codes {} {}", same ? "byte-identical" : "differ", ra.size(), ca, cb)};
  });

  std::printf("acceptance: %d failing criteria\n", failures);
  return failures == 0 ? 0 : 1;
}
