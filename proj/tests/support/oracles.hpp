// Batch reference computations used to cross-check the recursive engine.
#ifndef SOFPID_TESTS_ORACLES_HPP
#define SOFPID_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double d : values) v[i++] = d;
  return v;
}

inline Vector mean_of(const std::vector<Vector>& pts) {
  Vector m = Vector::Zero(pts.front().size());
  for (const auto& p : pts) m += p;
  return m / static_cast<double>(pts.size());
}

// Two-pass variance: mean squared distance to the mean.
inline double scatter_of(const std::vector<Vector>& pts, const Vector& m) {
  double s = 0.0;
  for (const auto& p : pts) s += (p - m).squaredNorm();
  return s / static_cast<double>(pts.size());
}

inline double mean_sq_norm(const std::vector<Vector>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s += p.squaredNorm();
  return s / static_cast<double>(pts.size());
}

// Cauchy density of q against the stored members with q added to the set.
inline double cloud_density(std::vector<Vector> members, const Vector& q) {
  members.push_back(q);
  const Vector m = mean_of(members);
  const double var = scatter_of(members, m);
  if (var <= 0.0) return 1.0;
  return 1.0 / (1.0 + (q - m).squaredNorm() / var);
}

// Cauchy density of w against every sample seen so far.
inline double global_density(const std::vector<Vector>& seen, const Vector& w) {
  const Vector m = mean_of(seen);
  const double var = scatter_of(seen, m);
  return 1.0 / (1.0 + (w - m).squaredNorm() / var);
}

inline Vector extend(const Vector& x) {
  Vector e(x.size() + 1);
  e.head(x.size()) = x;
  e[x.size()] = 1.0;
  return e;
}

// Weighted least squares solved by QR on the stacked system
//   [sqrt(w_k) xbar_k^T] a = [sqrt(w_k) y_k]
//   [ I / sqrt(omega0) ] a = [ a0 / sqrt(omega0) ]
// The second block is dropped when omega0 <= 0 (plain least squares).
inline Vector weighted_ls(const std::vector<Vector>& xbar, const std::vector<double>& y,
                          const std::vector<double>& w, double omega0, const Vector& a0) {
  const auto n = xbar.front().size();
  const auto rows = static_cast<Eigen::Index>(xbar.size()) + (omega0 > 0.0 ? n : 0);
  Matrix A = Matrix::Zero(rows, n);
  Vector b = Vector::Zero(rows);
  for (std::size_t k = 0; k < xbar.size(); ++k) {
    const double sw = std::sqrt(w[k]);
    A.row(static_cast<Eigen::Index>(k)) = sw * xbar[k].transpose();
    b[static_cast<Eigen::Index>(k)] = sw * y[k];
  }
  if (omega0 > 0.0) {
    const double s = 1.0 / std::sqrt(omega0);
    const auto off = static_cast<Eigen::Index>(xbar.size());
    A.block(off, 0, n, n) = s * Matrix::Identity(n, n);
    b.segment(off, n) = s * a0;
  }
  return A.colPivHouseholderQr().solve(b);
}

inline double rel_err(double got, double want) {
  return want == 0.0 ? std::fabs(got) : std::fabs(got - want) / std::fabs(want);
}

inline Vector random_vector(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace oracle

#endif  // SOFPID_TESTS_ORACLES_HPP
