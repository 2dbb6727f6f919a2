#pragma once

// Resource measures R_d and entanglement evaluators.

#include <cmath>
#include <string>
#include <utility>

#include "qmono/entropies.hpp"

namespace qmono {

inline bool is_unitary(const Matrix& u, double tol = kStateTol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// Relative entropy of coherence: H(populations in `basis`) - S_vN(rho).
/// The columns of `basis` are the incoherent basis vectors.
inline double rel_ent_coherence(const DensityMatrix& rho, const Matrix& basis) {
  if (basis.rows() != rho.dim() || basis.cols() != rho.dim())
    throw Error(ErrorCode::DimensionMismatch, "basis dimension differs from the state");
  if (!is_unitary(basis)) throw Error(ErrorCode::NotNormalized, "basis is not orthonormal");
  const Matrix rotated = basis.adjoint() * rho.data() * basis;
  std::vector<double> pops(rho.dim());
  for (int i = 0; i < rho.dim(); ++i) pops[i] = std::max(0.0, rotated(i, i).real());
  return std::max(0.0, shannon(pops) - von_neumann_entropy(rho));
}

/// Nonuniformity: log d - S for von Neumann/Renyi, and
/// R_sup - d^(q-1) S_T with R_sup = (d^(q-1) - 1)/(q - 1) for Tsallis.
inline double nonuniformity(const DensityMatrix& rho, const EntropyKind& kind) {
  const double d = rho.dim();
  const Spectrum spec = hermitian_spectrum(rho);
  switch (kind.family()) {
    case EntropyKind::Family::VonNeumann:
    case EntropyKind::Family::Renyi:
      return std::max(0.0, std::log(d) - entropy(spec, kind));
    case EntropyKind::Family::Tsallis: {
      const double q = kind.order();
      const double scale = std::pow(d, q - 1.0);
      return std::max(0.0, (scale - 1.0) / (q - 1.0) - scale * entropy(spec, kind));
    }
    case EntropyKind::Family::Binary:
      break;
  }
  throw Error(ErrorCode::BadOrder, "nonuniformity is defined for von Neumann, Renyi and Tsallis");
}

/// Sum of |negative eigenvalues| of the partial transpose. Maximum (d*-1)/2.
inline double negativity(const DensityMatrix& rho, BipartiteSplit split) {
  const auto ev = eigenvalues_desc(partial_transpose(rho, split, Side::A));
  double neg = 0.0;
  for (double v : ev)
    if (v < 0.0) neg -= v;
  return neg;
}

/// Wootters concurrence of a two-qubit state.
inline double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw Error(ErrorCode::DimensionMismatch, "concurrence needs a 2x2 state");
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es((rho.data() + rho.data().adjoint()) * 0.5);
  // Eigenvalues below the round-off floor are zero; their square roots
  // would otherwise feed ~1e-8 noise into the concurrence.
  const Eigen::VectorXd ev = es.eigenvalues().unaryExpr([](double v) { return v > 1e-14 ? std::sqrt(v) : 0.0; });
  const Matrix sqrt_rho = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  // The square roots of eig(rho rho~) are the singular values of
  // sqrt(rho) sqrt(rho~); taking them directly avoids sqrt of round-off.
  const Matrix sqrt_flipped = yy * sqrt_rho.conjugate() * yy;
  Eigen::JacobiSVD<Matrix> svd(Matrix(sqrt_rho * sqrt_flipped));
  std::vector<double> lam(4);
  for (int i = 0; i < 4; ++i) lam[i] = svd.singularValues()(i);
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

/// Two-qubit entanglement of formation in nats.
inline double eof_wootters(const DensityMatrix& rho) {
  const double c = concurrence(rho);
  return binary_entropy(std::clamp((1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))) / 2.0, 0.0, 1.0));
}

/// E(psi) = S(tr_B psi) for a pure global state.
template <class EntropyFn>
double pure_state_entanglement(const DensityMatrix& rho, BipartiteSplit split, EntropyFn&& entropy_fn) {
  if (!rho.is_pure()) throw Error(ErrorCode::NotPure, "state is not pure");
  return entropy_fn(hermitian_spectrum(partial_trace(rho, split, Side::A)));
}

/// Largest two-qubit negativity on the unitary orbit of a spectrum with at
/// most four entries: max{0, H}/2 with
/// H = sqrt((p1-p3)^2 + (p2-p4)^2) - p2 - p4.
inline double neg_spectrum_H(const Spectrum& spec) {
  if (spec.size() > 4) throw Error(ErrorCode::TooManyEntries, "two-qubit spectrum has more than 4 entries");
  const auto p = spec.padded(4);
  return std::hypot(p[0] - p[2], p[1] - p[3]) - p[1] - p[3];
}

inline double neg_spectrum_G(const Spectrum& spec) { return std::max(0.0, neg_spectrum_H(spec)) / 2.0; }

/// The entropy paired with two-qubit negativity: 1/2 - G.
inline double negativity_entropy(const Spectrum& spec) { return 0.5 - neg_spectrum_G(spec); }

/// Identifies a resource measure R_d together with its supremum.
class MeasureDescriptor {
 public:
  enum class Kind { CoherenceRelEnt, NonuniformityVN, NonuniformityRenyi, NonuniformityTsallis, NegativityTwoQubitSpectrum };

  static MeasureDescriptor coherence(Matrix basis) {
    if (!is_unitary(basis)) throw Error(ErrorCode::NotNormalized, "coherence basis is not unitary");
    MeasureDescriptor m(Kind::CoherenceRelEnt, static_cast<int>(basis.rows()), 1.0);
    m.basis_ = std::move(basis);
    return m;
  }
  static MeasureDescriptor coherence_computational(int d) { return coherence(Matrix::Identity(d, d)); }
  static MeasureDescriptor nonuniformity_vn(int d) { return MeasureDescriptor(Kind::NonuniformityVN, d, 1.0); }
  static MeasureDescriptor nonuniformity_renyi(int d, double alpha) {
    const auto k = EntropyKind::renyi(alpha);
    if (k.family() == EntropyKind::Family::VonNeumann) return nonuniformity_vn(d);
    return MeasureDescriptor(Kind::NonuniformityRenyi, d, alpha);
  }
  static MeasureDescriptor nonuniformity_tsallis(int d, double q) {
    const auto k = EntropyKind::tsallis(q);
    if (k.family() == EntropyKind::Family::VonNeumann) return nonuniformity_vn(d);
    return MeasureDescriptor(Kind::NonuniformityTsallis, d, q);
  }
  static MeasureDescriptor negativity_two_qubit() { return MeasureDescriptor(Kind::NegativityTwoQubitSpectrum, 4, 1.0); }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double order() const { return order_; }
  const Matrix& basis() const { return basis_; }

  /// True when R_d depends on the state only through its spectrum, so that
  /// R_d is constant on unitary orbits.
  bool spectrum_only() const {
    return kind_ == Kind::NonuniformityVN || kind_ == Kind::NonuniformityRenyi || kind_ == Kind::NonuniformityTsallis;
  }

  /// Entropy family behind the nonuniformity measures.
  EntropyKind entropy_kind() const {
    switch (kind_) {
      case Kind::NonuniformityRenyi: return EntropyKind::renyi(order_);
      case Kind::NonuniformityTsallis: return EntropyKind::tsallis(order_);
      default: return EntropyKind::von_neumann();
    }
  }

  double sup_value() const {
    switch (kind_) {
      case Kind::CoherenceRelEnt:
      case Kind::NonuniformityVN:
      case Kind::NonuniformityRenyi:
        return std::log(static_cast<double>(dim_));
      case Kind::NonuniformityTsallis:
        return (std::pow(static_cast<double>(dim_), order_ - 1.0) - 1.0) / (order_ - 1.0);
      case Kind::NegativityTwoQubitSpectrum:
        return 0.5;
    }
    return 0.0;
  }

  double evaluate(const DensityMatrix& rho) const {
    if (rho.dim() != dim_) throw Error(ErrorCode::DimensionMismatch, "measure dimension differs from the state");
    switch (kind_) {
      case Kind::CoherenceRelEnt: return rel_ent_coherence(rho, basis_);
      case Kind::NegativityTwoQubitSpectrum: return negativity(rho, {2, 2});
      default: return nonuniformity(rho, entropy_kind());
    }
  }

  std::string name() const {
    switch (kind_) {
      case Kind::CoherenceRelEnt: return "coherence";
      case Kind::NonuniformityVN: return "nonuniformity:vn";
      case Kind::NonuniformityRenyi: return "nonuniformity:" + entropy_kind().name();
      case Kind::NonuniformityTsallis: return "nonuniformity:" + entropy_kind().name();
      case Kind::NegativityTwoQubitSpectrum: return "negativity";
    }
    return "?";
  }

 private:
  MeasureDescriptor(Kind k, int d, double order) : kind_(k), dim_(d), order_(order) {
    if (d < 1) throw Error(ErrorCode::DimensionMismatch, "measure dimension must be positive");
  }

  Kind kind_;
  int dim_;
  double order_;
  Matrix basis_;
};

}  // namespace qmono
