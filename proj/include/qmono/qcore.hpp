#pragma once

// Dense complex-matrix quantum primitives: states, spectra, partial
// trace/transpose and seeded random sampling.
//
// Tensor ordering: factors are listed left to right and the composite
// index is row-major, i.e. for (d_a, d_b) the basis state |i>|j> has
// index i * d_b + j.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmono/errors.hpp"

namespace qmono {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

/// Tolerance used for Hermiticity, trace and positivity checks on states.
inline constexpr double kStateTol = 1e-10;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Side { A, B };

struct BipartiteSplit {
  int d_a = 1;
  int d_b = 1;

  int dim() const { return d_a * d_b; }
  int d_star() const { return std::min(d_a, d_b); }
};

inline double hermitian_deviation(const Matrix& m) {
  if (m.rows() != m.cols()) return kInf;
  return std::sqrt((m - m.adjoint()).cwiseAbs2().maxCoeff());
}

/// Eigenvalues of a Hermitian matrix in descending order (no clamping).
inline std::vector<double> eigenvalues_desc(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "eigenvalues of a non-square matrix");
  if (hermitian_deviation(m) > kStateTol)
    throw Error(ErrorCode::NotHermitian, "matrix deviates from its adjoint");
  if (m.rows() == 2) {
    // Closed form; the reduced states of qubit splits hit this path often.
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const cplx b = (m(0, 1) + std::conj(m(1, 0))) * 0.5;
    const double mean = 0.5 * (a + d), half = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    return {mean + half, mean - half};
  }
  // Solve on the exactly Hermitian part so round-off asymmetry is ignored.
  const Matrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Descending probability vector.
class Spectrum {
 public:
  Spectrum() = default;

  /// Sorts the input descending and validates it as a probability vector.
  static Spectrum from_probs(std::vector<double> probs) {
    if (probs.empty()) throw Error(ErrorCode::OutOfRange, "empty spectrum");
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0) || p > 1.0 + kStateTol)
        throw Error(ErrorCode::OutOfRange, "spectrum entry outside [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kStateTol)
      throw Error(ErrorCode::NotNormalized, "spectrum does not sum to 1");
    std::sort(probs.begin(), probs.end(), std::greater<>());
    Spectrum s;
    s.probs_ = std::move(probs);
    return s;
  }

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  /// Copy zero-padded (never truncated) to at least n entries.
  std::vector<double> padded(std::size_t n) const {
    std::vector<double> out = probs_;
    if (out.size() < n) out.resize(n, 0.0);
    return out;
  }

  /// Number of entries above `eps`.
  int rank(double eps = 1e-12) const {
    return static_cast<int>(std::count_if(probs_.begin(), probs_.end(),
                                          [eps](double p) { return p > eps; }));
  }

 private:
  std::vector<double> probs_;
};

/// Hermitian, unit-trace, positive semidefinite matrix plus its tensor factors.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(Matrix data, std::vector<int> factors = {})
      : data_(std::move(data)), factors_(std::move(factors)) {
    if (data_.rows() != data_.cols() || data_.rows() == 0)
      throw Error(ErrorCode::DimensionMismatch, "density matrix must be square");
    if (factors_.empty()) factors_ = {static_cast<int>(data_.rows())};
    const long prod = std::accumulate(factors_.begin(), factors_.end(), 1L, std::multiplies<>());
    if (prod != data_.rows())
      throw Error(ErrorCode::DimensionMismatch, "factor product differs from dimension");
    if (hermitian_deviation(data_) > kStateTol)
      throw Error(ErrorCode::NotHermitian, "density matrix deviates from its adjoint");
    if (std::abs(data_.trace() - cplx(1.0)) > kStateTol)
      throw Error(ErrorCode::NotNormalized, "density matrix trace differs from 1");
    if (eigenvalues_desc(data_).back() < -kStateTol)
      throw Error(ErrorCode::NotPositive, "density matrix has a negative eigenvalue");
  }

  static DensityMatrix from_pure(const Vector& psi, std::vector<int> factors = {}) {
    if (std::abs(psi.norm() - 1.0) > kStateTol)
      throw Error(ErrorCode::NotNormalized, "state vector is not normalized");
    return DensityMatrix(psi * psi.adjoint(), std::move(factors));
  }

  int dim() const { return static_cast<int>(data_.rows()); }
  const Matrix& data() const { return data_; }
  const std::vector<int>& factors() const { return factors_; }
  double purity() const { return (data_ * data_).trace().real(); }
  bool is_pure(double tol = 1e-8) const { return purity() >= 1.0 - tol; }

  DensityMatrix with_factors(std::vector<int> factors) const {
    return DensityMatrix(data_, std::move(factors));
  }

 private:
  Matrix data_;
  std::vector<int> factors_;
};

/// Spectrum of a state. Eigenvalues in [-1e-10, 0) are clamped to zero and
/// the vector renormalized; anything more negative is rejected.
inline Spectrum hermitian_spectrum(const Matrix& m) {
  std::vector<double> ev = eigenvalues_desc(m);
  if (ev.back() < -kStateTol)
    throw Error(ErrorCode::NotPositive, "eigenvalue below -1e-10");
  double sum = 0.0;
  for (double& v : ev) {
    v = std::max(v, 0.0);
    sum += v;
  }
  for (double& v : ev) v /= sum;
  return Spectrum::from_probs(std::move(ev));
}

inline Spectrum hermitian_spectrum(const DensityMatrix& rho) { return hermitian_spectrum(rho.data()); }

namespace detail {

inline std::vector<int> digits_of(long index, std::span<const int> factors) {
  std::vector<int> d(factors.size());
  for (std::size_t k = factors.size(); k-- > 0;) {
    d[k] = static_cast<int>(index % factors[k]);
    index /= factors[k];
  }
  return d;
}

inline long index_of(std::span<const int> digits, std::span<const int> factors) {
  long idx = 0;
  for (std::size_t k = 0; k < factors.size(); ++k) idx = idx * factors[k] + digits[k];
  return idx;
}

inline void check_subsystems(std::span<const int> subsystems, std::size_t n) {
  for (int s : subsystems)
    if (s < 0 || static_cast<std::size_t>(s) >= n)
      throw Error(ErrorCode::DimensionMismatch, "subsystem index out of range");
}

}  // namespace detail

/// Reduced state on the factors listed in `keep` (ascending order is kept).
inline DensityMatrix reduce(const DensityMatrix& rho, std::vector<int> keep) {
  const auto& f = rho.factors();
  detail::check_subsystems(keep, f.size());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(f.size()); ++k)
    if (!std::binary_search(keep.begin(), keep.end(), k)) traced.push_back(k);

  std::vector<int> kept_f, traced_f;
  for (int k : keep) kept_f.push_back(f[k]);
  for (int k : traced) traced_f.push_back(f[k]);
  const long kdim = std::accumulate(kept_f.begin(), kept_f.end(), 1L, std::multiplies<>());

  const int n = rho.dim();
  std::vector<long> kidx(n), tidx(n);
  std::vector<int> kd(keep.size()), td(traced.size());
  for (int i = 0; i < n; ++i) {
    const auto d = detail::digits_of(i, f);
    for (std::size_t a = 0; a < keep.size(); ++a) kd[a] = d[keep[a]];
    for (std::size_t a = 0; a < traced.size(); ++a) td[a] = d[traced[a]];
    kidx[i] = detail::index_of(kd, kept_f);
    tidx[i] = detail::index_of(td, traced_f);
  }
  Matrix out = Matrix::Zero(kdim, kdim);
  const Matrix& m = rho.data();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (tidx[i] == tidx[j]) out(kidx[i], kidx[j]) += m(i, j);
  return DensityMatrix(out, kept_f);
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, BipartiteSplit split, Side keep) {
  if (rho.dim() != split.dim())
    throw Error(ErrorCode::DimensionMismatch, "split does not factor the state dimension");
  return reduce(rho.with_factors({split.d_a, split.d_b}), {keep == Side::A ? 0 : 1});
}

/// Partial transpose over the listed factors. A pure index permutation, so
/// applying it twice returns the input bit for bit.
inline Matrix partial_transpose(const Matrix& m, std::span<const int> factors,
                                std::span<const int> transposed) {
  detail::check_subsystems(transposed, factors.size());
  const long prod = std::accumulate(factors.begin(), factors.end(), 1L, std::multiplies<>());
  if (m.rows() != prod || m.cols() != prod)
    throw Error(ErrorCode::DimensionMismatch, "factors do not match matrix dimension");
  const int n = static_cast<int>(prod);
  std::vector<std::vector<int>> digits(n);
  for (int i = 0; i < n; ++i) digits[i] = detail::digits_of(i, factors);
  Matrix out(n, n);
  std::vector<int> r, c;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r = digits[i];
      c = digits[j];
      for (int s : transposed) std::swap(r[s], c[s]);
      out(detail::index_of(r, factors), detail::index_of(c, factors)) = m(i, j);
    }
  }
  return out;
}

inline Matrix partial_transpose(const DensityMatrix& rho, BipartiteSplit split, Side side) {
  if (rho.dim() != split.dim())
    throw Error(ErrorCode::DimensionMismatch, "split does not factor the state dimension");
  const std::array<int, 2> f{split.d_a, split.d_b};
  const std::array<int, 1> t{side == Side::A ? 0 : 1};
  return partial_transpose(rho.data(), f, t);
}

inline Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return out;
}

inline DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  const Matrix out = kron(a.data(), b.data());
  std::vector<int> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return DensityMatrix(out, f);
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// Sampling

inline Matrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cplx(normal(rng), normal(rng));
  return g;
}

/// Haar unitary: QR of a Ginibre matrix with the phases of R's diagonal removed.
inline Matrix random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dim must be positive");
  const Matrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0 ? d / a : cplx(1.0));
  }
  return q;
}

inline Vector random_state_vector(int dim, Rng& rng) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dim must be positive");
  Vector v = ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

inline DensityMatrix random_pure_state(int dim, Rng& rng, std::vector<int> factors = {}) {
  return DensityMatrix::from_pure(random_state_vector(dim, rng), std::move(factors));
}

/// Hilbert-Schmidt (rank-restricted) mixed state G G^dag / tr with G dim x rank Ginibre.
inline DensityMatrix random_density_matrix(int dim, int rank, Rng& rng, std::vector<int> factors = {}) {
  if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dim must be positive");
  if (rank < 1 || rank > dim) throw Error(ErrorCode::BadRank, "rank must lie in [1, dim]");
  const Matrix g = ginibre(dim, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()) * 0.5;
  return DensityMatrix(rho, std::move(factors));
}

/// Permutation-symmetric three-qubit pure state in the basis
/// (|000>, W, Wbar, |111>), W = (|001>+|010>+|100>)/sqrt3,
/// Wbar = (|011>+|101>+|110>)/sqrt3.
inline DensityMatrix symmetric_three_qubit_pure(const std::array<cplx, 4>& coeffs) {
  double norm2 = 0.0;
  for (const auto& c : coeffs) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > kStateTol)
    throw Error(ErrorCode::NotNormalized, "symmetric amplitudes are not normalized");
  const double s = 1.0 / std::sqrt(3.0);
  Vector psi = Vector::Zero(8);
  psi(0) = coeffs[0];
  for (int i : {1, 2, 4}) psi(i) = coeffs[1] * s;
  for (int i : {3, 5, 6}) psi(i) = coeffs[2] * s;
  psi(7) = coeffs[3];
  psi /= psi.norm();
  return DensityMatrix::from_pure(psi, {2, 2, 2});
}

/// FNV-1a over the raw bytes of the matrix entries (column-major).
inline std::uint64_t fingerprint(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(cplx);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

/// Stream for trial `index` of a campaign seeded with `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(master ^ mix(index));
}

}  // namespace qmono
