#pragma once

// Reference implementations used only by the tests. None of these call the
// library routine they are compared against.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Uniform point on the unit sphere of R^{2d} by rejection from the cube,
/// read as a complex d-vector. Haar-distributed, independent of Gaussians.
inline Vec rejection_pure_state(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(2 * d);
  // For 2d > 8 acceptance drops fast; the tests stay at d <= 4.
  while (true) {
    double r2 = 0.0;
    for (double& v : x) {
      v = u(rng);
      r2 += v * v;
    }
    if (r2 > 1e-6 && r2 <= 1.0) {
      Vec psi(d);
      for (int i = 0; i < d; ++i) psi(i) = cplx(x[2 * i], x[2 * i + 1]);
      return psi / psi.norm();
    }
  }
}

/// tr_B of a pure state, via rho_A(i, i') = sum_j psi(i d_b + j) conj(psi(i' d_b + j)).
inline Mat reduced_from_vector(const Vec& psi, int d_a, int d_b) {
  Mat r = Mat::Zero(d_a, d_a);
  for (int i = 0; i < d_a; ++i)
    for (int k = 0; k < d_a; ++k)
      for (int j = 0; j < d_b; ++j) r(i, k) += psi(i * d_b + j) * std::conj(psi(k * d_b + j));
  return r;
}

/// Explicit 4-index loop partial trace over B.
inline Mat trace_out_b(const Mat& rho, int d_a, int d_b) {
  Mat r = Mat::Zero(d_a, d_a);
  for (int i = 0; i < d_a; ++i)
    for (int k = 0; k < d_a; ++k)
      for (int j = 0; j < d_b; ++j) r(i, k) += rho(i * d_b + j, k * d_b + j);
  return r;
}

/// Partial transpose on B by explicit index swap.
inline Mat transpose_b(const Mat& rho, int d_a, int d_b) {
  Mat r(rho.rows(), rho.cols());
  for (int i = 0; i < d_a; ++i)
    for (int j = 0; j < d_b; ++j)
      for (int k = 0; k < d_a; ++k)
        for (int l = 0; l < d_b; ++l) r(i * d_b + j, k * d_b + l) = rho(i * d_b + l, k * d_b + j);
  return r;
}

inline double negativity_b(const Mat& rho, int d_a, int d_b) {
  Eigen::SelfAdjointEigenSolver<Mat> es(transpose_b(rho, d_a, d_b));
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) s += std::max(0.0, -es.eigenvalues()(i));
  return s;
}

/// Negativity-paired entropy 1/2 - max(0, H)/2 with p sorted descending,
/// written out from the spectrum formula.
inline double neg_entropy(std::vector<double> p) {
  std::sort(p.begin(), p.end(), std::greater<>());
  p.resize(4, 0.0);
  const double h = std::sqrt((p[0] - p[2]) * (p[0] - p[2]) + (p[1] - p[3]) * (p[1] - p[3])) - p[1] - p[3];
  return 0.5 - std::max(0.0, h) / 2.0;
}

/// h(y) for d* = 3 by scanning the one-parameter family of the slice:
/// with q = sqrt(p), fix q3 and solve q1 + q2 = s - q3, q1^2 + q2^2 = 1 - q3^2.
inline double h3_bruteforce(double y, int steps = 40000) {
  const double s = std::sqrt(y);
  double best = 1e300;
  for (int n = 0; n <= steps; ++n) {
    const double q3 = std::min(1.0, s / 3.0 + 1e-12) * n / steps;
    const double a = s - q3, b = 1.0 - q3 * q3;
    const double prod = (a * a - b) / 2.0;
    const double disc = a * a - 4.0 * prod;
    if (disc < 0.0 || prod < -1e-15) continue;
    for (double sign : {-1.0, 1.0}) {
      const double q2 = (a + sign * std::sqrt(disc)) / 2.0, q1 = a - q2;
      if (q1 < 0.0 || q2 < 0.0) continue;
      best = std::min(best, neg_entropy({q1 * q1, q2 * q2, q3 * q3}));
    }
  }
  return best;
}

/// Haar unitary via Householder QR with the R-diagonal phase fix, using a
/// Box-Muller Gaussian source.
inline Mat haar_unitary(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto gauss = [&] {
    const double r = std::sqrt(-2.0 * std::log(1.0 - u(rng)));
    return r * std::cos(2.0 * M_PI * u(rng));
  };
  Mat z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = cplx(gauss(), gauss()) / std::sqrt(2.0);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

/// Max negativity over `samples` random unitary conjugations of diag(p).
inline double sampled_orbit_negativity(const std::vector<double>& p, int samples, std::mt19937_64& rng) {
  Mat d = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) d(i, i) = i < static_cast<int>(p.size()) ? p[i] : 0.0;
  double best = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Mat u = haar_unitary(4, rng);
    best = std::max(best, negativity_b(u * d * u.adjoint(), 2, 2));
  }
  return best;
}

}  // namespace oracle
