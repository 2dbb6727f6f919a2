#pragma once

// Upper estimate of the convex roof
//   E(rho) = inf over {P_k, psi_k} with sum_k P_k |psi_k><psi_k| = rho
//            of sum_k P_k S(tr_B |psi_k><psi_k|).
//
// Every K-element decomposition of a rank-r state is psi~_k = W v_k, where
// W = E diag(sqrt(lambda)) holds the scaled eigenvectors and v_k are the
// rows of a K x r isometry V. The search moves V by two-row Givens
// rotations (which keep V an isometry), one row pair at a time.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qmono/measures.hpp"
#include "qmono/optimize.hpp"

namespace qmono {

struct Decomposition {
  std::vector<double> weights;
  std::vector<Vector> states;

  Matrix reconstruct() const {
    const Eigen::Index n = states.empty() ? 0 : states.front().size();
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < states.size(); ++k) m += weights[k] * states[k] * states[k].adjoint();
    return m;
  }

  template <class EntropyFn>
  double average_entropy(BipartiteSplit split, EntropyFn&& entropy_fn) const {
    double total = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const Eigen::Map<const Matrix> coeffs(states[k].data(), split.d_b, split.d_a);
      total += weights[k] * entropy_fn(hermitian_spectrum(Matrix(coeffs.transpose() * coeffs.conjugate())));
    }
    return total;
  }
};

struct RoofConfig {
  /// 0 selects rank^2.
  int ensemble_size = 0;
  int restarts = 16;
  int max_sweeps = 300;
  /// A sweep that lowers the objective by less than this ends a restart.
  double sweep_tol = 1e-11;
  std::uint64_t seed = 0x726f6f66ULL;
};

struct RoofResult {
  double value = 0.0;
  Decomposition decomposition;
  int ensemble_size = 0;
  int rank = 0;
  /// Best value after each restart; non-increasing.
  std::vector<double> best_history;
};

namespace detail {

template <class EntropyFn>
class RoofObjective {
 public:
  RoofObjective(const Matrix& w, BipartiteSplit split, EntropyFn& fn)
      : w_(w), split_(split), fn_(fn), psi_(w.rows()), red_(split.d_a, split.d_a) {}

  /// Weight times entropy of the reduced state for one unnormalized row.
  /// Reuses member buffers, so one objective must not be shared across threads.
  double term(const Eigen::RowVectorXcd& row) const {
    psi_.noalias() = w_ * row.transpose();
    const double weight = psi_.squaredNorm();
    if (weight <= 1e-300) return 0.0;
    const Eigen::Map<const Matrix> coeffs(psi_.data(), split_.d_b, split_.d_a);
    red_.noalias() = coeffs.transpose() * coeffs.conjugate();
    red_ /= weight;
    for (Eigen::Index i = 0; i < red_.rows(); ++i) {
      red_(i, i) = red_(i, i).real();
      for (Eigen::Index k = i + 1; k < red_.cols(); ++k) red_(k, i) = std::conj(red_(i, k));
    }
    return weight * fn_(hermitian_spectrum(red_));
  }

 private:
  const Matrix& w_;
  BipartiteSplit split_;
  EntropyFn& fn_;
  mutable Vector psi_;
  mutable Matrix red_;
};

}  // namespace detail

template <class EntropyFn>
RoofResult estimate_convex_roof(const DensityMatrix& rho, BipartiteSplit split, EntropyFn&& entropy_fn,
                                const RoofConfig& cfg = {}) {
  if (rho.dim() != split.dim()) throw Error(ErrorCode::DimensionMismatch, "split does not factor the state dimension");

  Eigen::SelfAdjointEigenSolver<Matrix> es((rho.data() + rho.data().adjoint()) * 0.5);
  std::vector<int> support;
  for (int i = rho.dim() - 1; i >= 0; --i)
    if (es.eigenvalues()(i) > 1e-13) support.push_back(i);
  const int rank = static_cast<int>(support.size());
  Matrix w(rho.dim(), rank);
  for (int j = 0; j < rank; ++j)
    w.col(j) = es.eigenvectors().col(support[j]) * std::sqrt(es.eigenvalues()(support[j]));

  const int k_size = cfg.ensemble_size > 0 ? cfg.ensemble_size : rank * rank;
  if (k_size < rank) throw Error(ErrorCode::BadEnsembleSize, "ensemble size below the rank");

  detail::RoofObjective<std::remove_reference_t<EntropyFn>> objective(w, split, entropy_fn);
  auto total = [&](const Matrix& v) {
    double s = 0.0;
    for (int k = 0; k < v.rows(); ++k) s += objective.term(v.row(k));
    return s;
  };

  RoofResult out;
  out.rank = rank;
  out.ensemble_size = k_size;
  out.value = kInf;
  Matrix best_v;

  const int restarts = rank == 1 && k_size == 1 ? 1 : std::max(1, cfg.restarts);
  NelderMeadOptions nm;
  nm.initial_step = 0.3;
  nm.size_tol = 1e-5;
  nm.max_iter = 400;

  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    Matrix v = random_unitary(k_size, rng).leftCols(rank);
    std::vector<double> terms(k_size);
    for (int k = 0; k < k_size; ++k) terms[k] = objective.term(v.row(k));
    double current = 0.0;
    for (double t : terms) current += t;

    for (int sweep = 0; sweep < cfg.max_sweeps && k_size > 1; ++sweep) {
      const double before = current;
      for (int a = 0; a < k_size; ++a) {
        for (int b = a + 1; b < k_size; ++b) {
          const Eigen::RowVectorXcd ra = v.row(a), rb = v.row(b);
          auto rotated = [&](double t, double phi, Eigen::RowVectorXcd& na, Eigen::RowVectorXcd& nb) {
            const double c = std::cos(t), s = std::sin(t);
            const cplx e = std::polar(1.0, phi);
            na = c * ra - e * s * rb;
            nb = std::conj(e) * s * ra + c * rb;
          };
          Eigen::RowVectorXcd na, nb;
          auto pair_cost = [&](std::span<const double> x) {
            rotated(x[0], x[1], na, nb);
            return objective.term(na) + objective.term(nb);
          };
          const double base = terms[a] + terms[b];
          // Coarse scan of the rotation, then polish the best cell.
          double best = base;
          std::vector<double> arg{0.0, 0.0};
          constexpr double pi = std::numbers::pi;
          for (double t : {-3 * pi / 8, -pi / 4, -pi / 8, pi / 8, pi / 4, 3 * pi / 8, pi / 2}) {
            for (double phi : {0.0, pi / 2, pi, 3 * pi / 2}) {
              const double x[2] = {t, phi};
              const double c = pair_cost(x);
              if (c < best) {
                best = c;
                arg = {t, phi};
              }
            }
          }
          const auto res = nelder_mead(pair_cost, arg, nm);
          if (res.value < best) {
            best = res.value;
            arg = res.x;
          }
          if (best < base) {
            rotated(arg[0], arg[1], na, nb);
            v.row(a) = na;
            v.row(b) = nb;
            terms[a] = objective.term(na);
            terms[b] = objective.term(nb);
            current += terms[a] + terms[b] - base;
          }
        }
      }
      if (before - current < cfg.sweep_tol) break;
    }
    current = total(v);
    if (current < out.value) {
      out.value = current;
      best_v = v;
    }
    out.best_history.push_back(out.value);
  }

  Decomposition dec;
  for (int k = 0; k < best_v.rows(); ++k) {
    const Vector psi = w * best_v.row(k).transpose();
    const double weight = psi.squaredNorm();
    if (weight <= 1e-300) continue;
    dec.weights.push_back(weight);
    dec.states.push_back(psi / std::sqrt(weight));
  }
  const double err = (dec.reconstruct() - rho.data()).norm();
  if (err > 1e-8) throw Error(ErrorCode::ReconstructionFailed, "decomposition does not reproduce the state");
  out.decomposition = std::move(dec);
  return out;
}

}  // namespace qmono
