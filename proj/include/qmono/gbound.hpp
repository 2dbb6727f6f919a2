#pragma once

// G/S pair, unitary-orbit suprema, the h(y) minimization over F(y), the
// lower convex envelope and the g(x) bound functions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "qmono/measures.hpp"
#include "qmono/optimize.hpp"

namespace qmono {

// ---------------------------------------------------------------------------
// Unitary-orbit supremum

struct OrbitConfig {
  int restarts = 32;
  double step_tol = 1e-6;
  /// Largest improvement allowed in the final quarter of restarts.
  double convergence_tol = 1e-6;
  bool require_convergence = true;
  std::uint64_t seed = 0x6f72626974ULL;
};

struct OrbitResult {
  double value = 0.0;
  bool converged = true;
  bool closed_form = false;
  /// Best value after each restart; non-decreasing.
  std::vector<double> best_history;
};

/// sup_U R(U rho U^dag) by random-restart simplex search over Givens angles.
/// `measure` receives the conjugated matrix (Hermitian, unit trace).
template <class MeasureFn>
OrbitResult orbit_sup(MeasureFn&& measure, const DensityMatrix& rho, const OrbitConfig& cfg = {}) {
  const int d = rho.dim();
  OrbitResult out;
  out.value = -kInf;
  const int restarts = std::max(1, cfg.restarts);
  const int final_block = std::max(1, restarts / 4);
  double best_before_final = -kInf;

  NelderMeadOptions nm;
  nm.initial_step = 0.4;
  nm.size_tol = cfg.step_tol * 1e-2;
  nm.max_iter = 200 * std::max(1, givens_parameter_count(d));

  for (int r = 0; r < restarts; ++r) {
    if (r == restarts - final_block) best_before_final = out.value;
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    const Matrix start = random_unitary(d, rng);
    const Matrix start_rho = start * rho.data() * start.adjoint();
    auto objective = [&](std::span<const double> p) {
      const Matrix g = givens_unitary(d, p);
      return -measure(Matrix(g * start_rho * g.adjoint()));
    };
    const auto res = nelder_mead(objective, std::vector<double>(givens_parameter_count(d), 0.0), nm);
    out.value = std::max(out.value, -res.value);
    out.best_history.push_back(out.value);
  }
  if (restarts > final_block) out.converged = out.value - best_before_final <= cfg.convergence_tol;
  if (cfg.require_convergence && !out.converged)
    throw Error(ErrorCode::OptimizerFailed, "orbit supremum still improving in the final restarts");
  return out;
}

/// G(rho) = sup over the unitary orbit of the measure. Nonuniformity
/// measures are orbit-invariant and the negativity measure has the
/// closed form max{0, H}/2; only coherence runs the optimizer.
inline OrbitResult g_orbit_sup(const MeasureDescriptor& measure, const DensityMatrix& rho, const OrbitConfig& cfg = {}) {
  if (rho.dim() != measure.dim()) throw Error(ErrorCode::DimensionMismatch, "measure dimension differs from the state");
  OrbitResult out;
  out.closed_form = true;
  if (measure.spectrum_only()) {
    out.value = measure.evaluate(rho);
  } else if (measure.kind() == MeasureDescriptor::Kind::NegativityTwoQubitSpectrum) {
    out.value = neg_spectrum_G(hermitian_spectrum(rho));
  } else {
    const double svn = von_neumann_entropy(rho);
    const Matrix& basis = measure.basis();
    auto coherence = [&](const Matrix& m) {
      const Matrix rot = basis.adjoint() * m * basis;
      double h = 0.0;
      for (Eigen::Index i = 0; i < rot.rows(); ++i) h -= xlogx(std::max(0.0, rot(i, i).real()));
      return h - svn;
    };
    out = orbit_sup(coherence, rho, cfg);
    return out;
  }
  out.best_history = {out.value};
  return out;
}

/// S = R_sup - G evaluated from a spectrum alone.
inline double entropy_from_measure(const MeasureDescriptor& measure, const Spectrum& spec) {
  if (spec.rank() > measure.dim()) throw Error(ErrorCode::RankTooLarge, "spectrum rank exceeds the measure dimension");
  std::vector<double> p(spec.probs().begin(), spec.probs().end());
  p.resize(measure.dim(), 0.0);
  const Spectrum s = Spectrum::from_probs(std::move(p));
  switch (measure.kind()) {
    case MeasureDescriptor::Kind::CoherenceRelEnt:
    case MeasureDescriptor::Kind::NonuniformityVN:
    case MeasureDescriptor::Kind::NonuniformityRenyi:
      return entropy(s, measure.entropy_kind());
    case MeasureDescriptor::Kind::NonuniformityTsallis:
      return std::pow(static_cast<double>(measure.dim()), measure.order() - 1.0) * entropy(s, measure.entropy_kind());
    case MeasureDescriptor::Kind::NegativityTwoQubitSpectrum:
      return negativity_entropy(s);
  }
  return 0.0;
}

/// G evaluated from a spectrum alone (R_sup - S).
inline double g_from_spectrum(const MeasureDescriptor& measure, const Spectrum& spec) {
  return measure.sup_value() - entropy_from_measure(measure, spec);
}

// ---------------------------------------------------------------------------
// h(y) = inf_{p in F(y)} S(p),  F(y) = {p >= 0, sum p = 1, sum sqrt(p) = sqrt(y)}

struct HConfig {
  int sweep_points = 10000;
  int polish_starts = 4;
  double polish_tol = 1e-11;
};

struct HResult {
  double value = kInf;
  std::vector<double> argmin;
};

namespace detail {

using Probs4 = std::array<double, 4>;

inline double sqrt_sum(const Probs4& p, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += std::sqrt(std::max(0.0, p[i]));
  return s;
}

/// Moves p along the segment towards e_1 (if its sqrt-sum is too large) or
/// towards the uniform vector (if too small) until the sqrt-sum equals
/// sqrt(y). The sqrt-sum is concave along segments, so the crossing is unique.
inline Probs4 project_to_slice(const Probs4& p, int d, double y) {
  const double target = std::sqrt(y);
  const double s0 = sqrt_sum(p, d);
  if (std::abs(s0 - target) <= 1e-15) return p;
  Probs4 anchor{};
  if (s0 > target)
    anchor[0] = 1.0;
  else
    for (int i = 0; i < d; ++i) anchor[i] = 1.0 / d;
  Probs4 m{};
  auto at = [&](double t) {
    for (int i = 0; i < d; ++i) m[i] = (1.0 - t) * p[i] + t * anchor[i];
    return sqrt_sum(m, d) - target;
  };
  // Illinois-modified regula falsi on [0, 1].
  double a = 0.0, b = 1.0;
  double fa = s0 - target, fb = at(1.0);
  if (fb == 0.0) return m;
  int side = 0;
  double t = 0.0;
  for (int it = 0; it < 100; ++it) {
    t = (a * fb - b * fa) / (fb - fa);
    const double ft = at(t);
    if (std::abs(ft) <= 1e-15 || b - a <= 1e-16) break;
    if ((ft > 0) == (fb > 0)) {
      b = t;
      fb = ft;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = t;
      fa = ft;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  at(t);
  return m;
}

inline double radical_inverse(unsigned long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

/// Halton point i mapped to the (d-1)-simplex by the sorted-spacings rule.
inline Probs4 halton_simplex_point(unsigned long i, int d) {
  static constexpr unsigned primes[] = {2, 3, 5};
  std::array<double, 5> u{};
  u[d] = 1.0;
  for (int k = 0; k + 1 < d; ++k) u[k + 1] = radical_inverse(i + 1, primes[k]);
  std::sort(u.begin(), u.begin() + d + 1);
  Probs4 p{};
  for (int k = 0; k < d; ++k) p[k] = u[k + 1] - u[k];
  return p;
}

/// Sweep table shared by every y of one envelope build.
class SliceSearch {
 public:
  SliceSearch(int d_star, const HConfig& cfg) : d_(d_star), cfg_(cfg) {
    if (d_star < 2 || d_star > 4) throw Error(ErrorCode::UnsupportedDStar, "d* must be 2, 3 or 4");
    Probs4 e{};
    e[0] = 1.0;
    table_.push_back(e);
    Probs4 u{};
    for (int i = 0; i < d_; ++i) u[i] = 1.0 / d_;
    table_.push_back(u);
    for (int i = 0; i < cfg.sweep_points; ++i) table_.push_back(halton_simplex_point(static_cast<unsigned long>(i), d_));
  }

  template <class EntropyFn>
  HResult solve(double y, EntropyFn& entropy_fn) const {
    const double dd = d_;
    if (!(y >= 1.0 - 1e-12 && y <= dd + 1e-12)) throw Error(ErrorCode::OutOfRange, "y must lie in [1, d*]");
    y = std::clamp(y, 1.0, dd);

    std::vector<double> buf(d_);
    auto evaluate = [&](const Probs4& raw, Probs4& out) {
      out = project_to_slice(raw, d_, y);
      double sum = 0.0;
      for (int i = 0; i < d_; ++i) {
        out[i] = std::max(out[i], 0.0);
        sum += out[i];
      }
      for (int i = 0; i < d_; ++i) buf[i] = out[i] /= sum;
      return static_cast<double>(entropy_fn(Spectrum::from_probs(buf)));
    };

    const std::size_t keep = static_cast<std::size_t>(std::max(1, cfg_.polish_starts));
    std::vector<std::pair<double, Probs4>> seeds;
    Probs4 p{};
    for (const Probs4& raw : table_) {
      const double v = evaluate(raw, p);
      if (seeds.size() == keep && v >= seeds.back().first) continue;
      auto pos = std::upper_bound(seeds.begin(), seeds.end(), v, [](double a, const auto& s) { return a < s.first; });
      seeds.insert(pos, {v, p});
      if (seeds.size() > keep) seeds.pop_back();
    }

    HResult best;
    best.value = seeds.front().first;
    best.argmin.assign(seeds.front().second.begin(), seeds.front().second.begin() + d_);

    NelderMeadOptions nm;
    nm.initial_step = 0.05;
    nm.size_tol = cfg_.polish_tol;
    nm.max_iter = 5000;
    // Polish in z with p = z^2 / |z|^2, which stays on the simplex.
    auto from_z = [&](std::span<const double> z) {
      Probs4 q{};
      double n2 = 0.0;
      for (int k = 0; k < d_; ++k) n2 += z[k] * z[k];
      for (int k = 0; k < d_; ++k) q[k] = n2 > 0.0 ? z[k] * z[k] / n2 : 0.0;
      return std::make_pair(q, n2 > 0.0);
    };
    for (const auto& [val, sp] : seeds) {
      std::vector<double> z(d_);
      for (int k = 0; k < d_; ++k) z[k] = std::sqrt(sp[k]);
      auto objective = [&](std::span<const double> zz) {
        const auto [q, ok] = from_z(zz);
        if (!ok) return kInf;
        Probs4 out{};
        return evaluate(q, out);
      };
      const auto res = nelder_mead(objective, z, nm);
      if (res.value < best.value) {
        Probs4 out{};
        const double v = evaluate(from_z(res.x).first, out);
        if (v < best.value) {
          best.value = v;
          best.argmin.assign(out.begin(), out.begin() + d_);
        }
      }
    }
    return best;
  }

 private:
  int d_;
  HConfig cfg_;
  std::vector<Probs4> table_;
};

}  // namespace detail

/// Infimum of `entropy_fn` over F(y) for y in [1, d_star]: a quasi-random
/// sweep of the simplex projected onto the slice, then simplex polish from
/// the best sweep points.
template <class EntropyFn>
HResult h_of_y(int d_star, double y, EntropyFn&& entropy_fn, const HConfig& cfg = {}) {
  return detail::SliceSearch(d_star, cfg).solve(y, entropy_fn);
}

// ---------------------------------------------------------------------------
// Lower convex envelope on a grid

struct EnvelopeFunction {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> hull_ys;
  /// Grid indices of the lower-hull vertices, ascending.
  std::vector<std::size_t> vertices;

  /// Piecewise-linear interpolation of the envelope.
  double evaluate(double x) const {
    const double lo = xs.front(), hi = xs.back();
    const double span = hi - lo;
    if (x < lo - 1e-12 * span || x > hi + 1e-12 * span) throw Error(ErrorCode::OutOfRange, "x outside the envelope grid");
    x = std::clamp(x, lo, hi);
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.end()) return hull_ys.back();
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    if (j == 0) return hull_ys.front();
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return (1.0 - t) * hull_ys[j - 1] + t * hull_ys[j];
  }

  /// Start abscissa and slope of the final hull segment.
  std::pair<double, double> final_segment() const {
    const std::size_t a = vertices[vertices.size() - 2], b = vertices.back();
    return {xs[a], (ys[b] - ys[a]) / (xs[b] - xs[a])};
  }
};

/// Greatest convex minorant of (xs, ys) sampled on the same grid.
inline EnvelopeFunction lower_convex_envelope(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 3 || xs.size() != ys.size()) throw Error(ErrorCode::BadGrid, "need at least 3 matching samples");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw Error(ErrorCode::BadGrid, "non-finite sample");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorCode::BadGrid, "xs must be strictly ascending");
  }
  EnvelopeFunction env;
  // Andrew's monotone chain, lower half.
  std::vector<std::size_t>& h = env.vertices;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      const double cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
      if (cross <= 0.0)
        h.pop_back();
      else
        break;
    }
    h.push_back(i);
  }
  env.hull_ys.resize(xs.size());
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const std::size_t a = h[k], b = h[k + 1];
    for (std::size_t i = a; i <= b; ++i) {
      const double t = (xs[i] - xs[a]) / (xs[b] - xs[a]);
      env.hull_ys[i] = std::min(ys[i], (1.0 - t) * ys[a] + t * ys[b]);
    }
  }
  env.xs = std::move(xs);
  env.ys = std::move(ys);
  return env;
}

// ---------------------------------------------------------------------------
// g(x) = co(h)(2x + 1) for two-qubit A and negativity

inline double g_domain_max(int d_star) { return (d_star - 1) / 2.0; }

inline double g_analytic(int d_star, double x) {
  if (d_star < 2 || d_star > 4) throw Error(ErrorCode::UnsupportedDStar, "closed-form g exists for d* = 2, 3, 4");
  const double xmax = g_domain_max(d_star);
  if (!(x >= -1e-12 && x <= xmax + 1e-12)) throw Error(ErrorCode::OutOfRange, "x outside [0, (d*-1)/2]");
  x = std::clamp(x, 0.0, xmax);
  switch (d_star) {
    case 2:
      return (1.5 - std::sqrt(std::max(0.0, 1.0 - 2.0 * x * x)) - std::sqrt(std::max(0.0, 0.25 - x * x))) / 2.0;
    case 3: {
      const double r = std::sqrt(2.0 * x + 1.0) - std::sqrt(std::max(0.0, 1.0 - x));
      const double k = r * r;
      // k (sqrt(1 + (9/k - 3)^2) - 1) rewritten without the 1/k.
      return 0.5 - (std::sqrt(k * k + (9.0 - 3.0 * k) * (9.0 - 3.0 * k)) - k) / 18.0;
    }
    default: {
      if (x <= 1.0) {
        const double s = std::sqrt(1.0 + 2.0 * x) + std::sqrt(std::max(0.0, 9.0 - 6.0 * x));
        return 1.0 - s * s / 16.0;
      }
      return x / 2.0 - 0.25;
    }
  }
}

struct GNumericConfig {
  int grid_points = 2001;
  /// Per-y search used for the envelope; lighter than the h_of_y default
  /// because 2001 slices are solved.
  HConfig h{2000, 1, 1e-11};
};

/// g built numerically: h on a uniform y-grid over [1, d*], its lower
/// convex envelope, read off at y = 2x + 1.
class NumericG {
 public:
  NumericG(int d_star, const GNumericConfig& cfg = {}) : d_star_(d_star) {
    if (d_star < 2 || d_star > 4) throw Error(ErrorCode::UnsupportedDStar, "d* must be 2, 3 or 4");
    if (cfg.grid_points < 3) throw Error(ErrorCode::BadGrid, "need at least 3 grid points");
    const detail::SliceSearch search(d_star, cfg.h);
    auto fn = negativity_entropy;
    std::vector<double> ys(cfg.grid_points), hs(cfg.grid_points);
    for (int i = 0; i < cfg.grid_points; ++i) {
      ys[i] = 1.0 + (d_star - 1.0) * i / (cfg.grid_points - 1);
      hs[i] = search.solve(ys[i], fn).value;
    }
    envelope_ = lower_convex_envelope(std::move(ys), std::move(hs));
  }

  int d_star() const { return d_star_; }
  const EnvelopeFunction& envelope() const { return envelope_; }

  double operator()(double x) const {
    const double xmax = g_domain_max(d_star_);
    if (!(x >= -1e-12 && x <= xmax + 1e-12)) throw Error(ErrorCode::OutOfRange, "x outside [0, (d*-1)/2]");
    return envelope_.evaluate(std::clamp(2.0 * x + 1.0, 1.0, static_cast<double>(d_star_)));
  }

 private:
  int d_star_;
  EnvelopeFunction envelope_;
};

/// One-shot numeric g; builds the full envelope on every call.
inline double g_numeric(int d_star, double x, const GNumericConfig& cfg = {}) { return NumericG(d_star, cfg)(x); }

}  // namespace qmono
