#include "heckelab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "heckelab/error.hpp"

namespace heckelab {

namespace {

double off_norm2(const Eigen::MatrixXd& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < q; ++p) s += 2.0 * a(p, q) * a(p, q);
  return s;
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw Error(ErrorKind::NonSymmetric, "matrix is not square");
  const Eigen::Index n = M.rows();
  SymmetricEigen out;
  if (n == 0) return out;
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-8 * scale))
    throw Error(ErrorKind::NonSymmetric, "matrix asymmetry " + std::to_string(asym) + " exceeds tolerance");

  Eigen::MatrixXd a = 0.5 * (M + M.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = 1e-12 * a.norm();
  const double target2 = target * target;

  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    if (off_norm2(a) <= target2) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        // skip negligible elements once the diagonal dwarfs them
        if (sweep > 3 && std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        double* colp = a.col(p).data();
        double* colq = a.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = colp[k], akq = colq[k];
          colp[k] = c * akp - s * akq;
          colq[k] = s * akp + c * akq;
        }
        colp[p] = app - t * apq;
        colq[q] = aqq + t * apq;
        colp[q] = 0.0;
        colq[p] = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a(p, k) = colp[k];
          a(q, k) = colq[k];
        }
        double* vp = v.col(p).data();
        double* vq = v.col(q).data();
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = vp[k], vkq = vq[k];
          vp[k] = c * vkp - s * vkq;
          vq[k] = s * vkp + c * vkq;
        }
      }
    }
  }
  out.sweeps = sweep;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[i], order[i]);
    Eigen::VectorXd col = v.col(order[i]);
    Eigen::Index big = 0;
    for (Eigen::Index k = 1; k < n; ++k)
      if (std::abs(col(k)) > std::abs(col(big)) + 1e-12) big = k;
    if (col(big) < 0) col = -col;
    out.vectors.col(i) = col;
  }
  return out;
}

}  // namespace heckelab
