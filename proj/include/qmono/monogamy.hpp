#pragma once

// Evaluators for the resource/entanglement monogamy inequalities, the
// three-qubit comparison curves and their crossover.

#include <array>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmono/convexroof.hpp"
#include "qmono/gbound.hpp"

namespace qmono {

enum class InequalityId {
  Resource,         // R_d(rho_A) + E(rho) <= R_sup
  Entanglement,     // E_N(A1:A2) + E(A1A2:B) <= 1/2
  NegativityG,      // E_N(A1:A2) + g(E_N(A1A2:B)) <= 1/2
  Usual,            // E_N^2(A1:A2) + E_N^2(A1:A3) <= E_N^2(A1:A2A3)
  NPartySum,        // sum_k E_N^2(A1:Ak) + E(A1A2A3:B) <= 1/4
  NPartyTriangle,   // (2/3) sum_{k<l} E_N^2(Ak:Al) + E <= 1/4
};

constexpr std::string_view to_string(InequalityId id) {
  switch (id) {
    case InequalityId::Resource: return "resource";
    case InequalityId::Entanglement: return "entanglement";
    case InequalityId::NegativityG: return "negativity-g";
    case InequalityId::Usual: return "usual";
    case InequalityId::NPartySum: return "n-party-sum";
    case InequalityId::NPartyTriangle: return "n-party-triangle";
  }
  return "?";
}

struct MonogamyReport {
  InequalityId id = InequalityId::Resource;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool violated = false;
  std::uint64_t seed = 0;
  std::uint64_t state_fingerprint = 0;
  double tol = 1e-9;
  /// E came from the convex-roof search (an upper estimate).
  bool approximate = false;
  /// The state lies outside the proven validity domain of the inequality.
  bool out_of_domain = false;
  std::string evaluator;
  /// Named contributions to lhs/rhs, in evaluation order.
  std::vector<std::pair<std::string, double>> terms;
};

inline constexpr double kClosedFormTol = 1e-9;
inline constexpr double kRoofTol = 1e-4;

namespace detail {

inline MonogamyReport finish_report(MonogamyReport r, const DensityMatrix& rho, double tol) {
  r.tol = r.approximate ? std::max(tol, kRoofTol) : tol;
  r.slack = r.rhs - r.lhs;
  r.violated = r.slack < -r.tol;
  r.state_fingerprint = fingerprint(rho.data());
  return r;
}

inline DensityMatrix as_factors(const DensityMatrix& rho, std::vector<int> factors) {
  long prod = 1;
  for (int f : factors) prod *= f;
  if (prod != rho.dim()) throw Error(ErrorCode::DimensionMismatch, "dimensions do not factor the state");
  return rho.with_factors(std::move(factors));
}

}  // namespace detail

/// E(rho) for the entropy S paired with a measure: the reduced-state
/// entropy for pure states, the convex-roof search otherwise. Two-qubit
/// mixed states with S = S_vN use the Wootters formula.
class EntanglementEvaluator {
 public:
  explicit EntanglementEvaluator(MeasureDescriptor measure, RoofConfig roof = {})
      : measure_(std::move(measure)), roof_(roof) {}

  struct Value {
    double value = 0.0;
    bool approximate = false;
    std::string method;
  };

  Value operator()(const DensityMatrix& rho, BipartiteSplit split) const {
    if (rho.dim() != split.dim()) throw Error(ErrorCode::DimensionMismatch, "split does not factor the state dimension");
    auto s_fn = [this](const Spectrum& sp) { return entropy_from_measure(measure_, sp); };
    if (rho.is_pure()) return {pure_state_entanglement(rho, split, s_fn), false, "pure-reduction"};
    const bool vn = measure_.kind() == MeasureDescriptor::Kind::CoherenceRelEnt ||
                    measure_.kind() == MeasureDescriptor::Kind::NonuniformityVN;
    if (vn && split.d_a == 2 && split.d_b == 2) return {eof_wootters(rho), false, "wootters"};
    return {estimate_convex_roof(rho, split, s_fn, roof_).value, true, "convex-roof"};
  }

  const MeasureDescriptor& measure() const { return measure_; }

 private:
  MeasureDescriptor measure_;
  RoofConfig roof_;
};

/// R_d(tr_B rho) + E(rho) <= R_sup for a bipartite rho on A (x) B.
inline MonogamyReport check_resource_monogamy(const DensityMatrix& rho, BipartiteSplit split,
                                              const MeasureDescriptor& measure, const EntanglementEvaluator& ent,
                                              double tol = kClosedFormTol) {
  if (split.d_a != measure.dim()) throw Error(ErrorCode::DimensionMismatch, "measure acts on a different dimension than A");
  const DensityMatrix rho_a = partial_trace(rho, split, Side::A);
  const double r = measure.evaluate(rho_a);
  const auto e = ent(rho, split);
  MonogamyReport rep;
  rep.id = InequalityId::Resource;
  rep.lhs = r + e.value;
  rep.rhs = measure.sup_value();
  rep.approximate = e.approximate;
  rep.evaluator = measure.name() + "/" + e.method;
  rep.terms = {{"R", r}, {"E", e.value}, {"R_sup", rep.rhs}};
  return detail::finish_report(std::move(rep), rho, tol);
}

/// E_N(A1:A2) + E(A1A2:B) <= 1/2 with A1, A2 qubits and E built from the
/// negativity entropy. `dims` = (d1, d2, d_B).
inline MonogamyReport check_entanglement_monogamy(const DensityMatrix& rho, std::array<int, 3> dims,
                                                  double tol = kClosedFormTol, const RoofConfig& roof = {}) {
  if (dims[0] != 2 || dims[1] != 2) throw Error(ErrorCode::DimensionMismatch, "A1 and A2 must be qubits");
  const DensityMatrix r = detail::as_factors(rho, {dims[0], dims[1], dims[2]});
  const DensityMatrix rho_a = reduce(r, {0, 1});
  const double en = negativity(rho_a, {2, 2});
  const BipartiteSplit ab{4, dims[2]};
  MonogamyReport rep;
  rep.id = InequalityId::Entanglement;
  double e = 0.0;
  if (r.is_pure()) {
    e = negativity_entropy(hermitian_spectrum(rho_a));
    rep.evaluator = "pure-reduction";
  } else {
    e = estimate_convex_roof(r.with_factors({4, dims[2]}), ab, negativity_entropy, roof).value;
    rep.approximate = true;
    rep.evaluator = "convex-roof";
  }
  rep.lhs = en + e;
  rep.rhs = 0.5;
  rep.terms = {{"EN_A1A2", en}, {"E_AB", e}};
  return detail::finish_report(std::move(rep), r, tol);
}

/// E_N(A1:A2) + g(E_N(A1A2:B)) <= 1/2 with d* = min(4, d_B).
inline MonogamyReport check_negativity_g(const DensityMatrix& rho, std::array<int, 3> dims, double tol = kClosedFormTol) {
  if (dims[0] != 2 || dims[1] != 2) throw Error(ErrorCode::DimensionMismatch, "A1 and A2 must be qubits");
  const int d_star = std::min(4, dims[2]);
  if (d_star < 2) throw Error(ErrorCode::UnsupportedDStar, "d* must be 2, 3 or 4");
  const DensityMatrix r = detail::as_factors(rho, {dims[0], dims[1], dims[2]});
  const double en12 = negativity(reduce(r, {0, 1}), {2, 2});
  const double en_ab = negativity(r.with_factors({4, dims[2]}), {4, dims[2]});
  const double g = g_analytic(d_star, std::min(en_ab, g_domain_max(d_star)));
  MonogamyReport rep;
  rep.id = InequalityId::NegativityG;
  rep.lhs = en12 + g;
  rep.rhs = 0.5;
  rep.evaluator = "g-closed-form:d*=" + std::to_string(d_star);
  rep.terms = {{"EN_A1A2", en12}, {"EN_AB", en_ab}, {"g", g}};
  return detail::finish_report(std::move(rep), r, tol);
}

/// E_N^2(A1:A2) + E_N^2(A1:A3) <= E_N^2(A1:A2A3) for a pure three-qubit state.
inline MonogamyReport check_usual_monogamy(const DensityMatrix& rho, double tol = kClosedFormTol) {
  const DensityMatrix r = detail::as_factors(rho, {2, 2, 2});
  if (!r.is_pure()) throw Error(ErrorCode::NotPure, "three-qubit check needs a pure state");
  const double e12 = negativity(reduce(r, {0, 1}), {2, 2});
  const double e13 = negativity(reduce(r, {0, 2}), {2, 2});
  const double e1_23 = negativity(r.with_factors({2, 4}), {2, 4});
  MonogamyReport rep;
  rep.id = InequalityId::Usual;
  rep.lhs = e12 * e12 + e13 * e13;
  rep.rhs = e1_23 * e1_23;
  rep.evaluator = "negativity-squared";
  rep.terms = {{"EN_A1A2", e12}, {"EN_A1A3", e13}, {"EN_A1_A2A3", e1_23}};
  return detail::finish_report(std::move(rep), r, tol);
}

/// The two combined inequalities for A = three qubits and a pure state on
/// A (x) B, with E~ = E_N^2 (maximum 1/4). E(A:B) for the split A_k : rest
/// equals 1/4 - sup_U E_N^2, which is 0 whenever rank(rho_A) <= 2 (two
/// orthogonal maximally entangled states span a rank-2 support). Higher
/// ranks raise Unsupported. `n_parties` must be 3.
inline std::array<MonogamyReport, 2> check_combined_n_party(const DensityMatrix& rho, int n_parties, int d_b,
                                                            double tol = kClosedFormTol) {
  if (n_parties != 3) throw Error(ErrorCode::Unsupported, "combined inequalities are implemented for three qubits");
  const DensityMatrix r = detail::as_factors(rho, {2, 2, 2, d_b});
  if (!r.is_pure()) throw Error(ErrorCode::NotPure, "combined check needs a pure global state");
  const DensityMatrix rho_a = reduce(r, {0, 1, 2});
  if (hermitian_spectrum(rho_a).rank(1e-12) > 2)
    throw Error(ErrorCode::Unsupported, "E(A:B) for rank(rho_A) > 2 is not implemented");
  const double e_ab = 0.0;

  auto pair_sq = [&](int k, int l) {
    const double v = negativity(reduce(rho_a, {k, l}), {2, 2});
    return v * v;
  };
  const double s12 = pair_sq(0, 1), s13 = pair_sq(0, 2), s23 = pair_sq(1, 2);

  std::array<MonogamyReport, 2> out;
  MonogamyReport& sum = out[0];
  sum.id = InequalityId::NPartySum;
  sum.lhs = s12 + s13 + e_ab;
  sum.rhs = 0.25;
  sum.evaluator = "negativity-squared/rank<=2";
  sum.terms = {{"EN2_A1A2", s12}, {"EN2_A1A3", s13}, {"E_AB", e_ab}};

  MonogamyReport& tri = out[1];
  tri.id = InequalityId::NPartyTriangle;
  tri.lhs = 2.0 / 3.0 * (s12 + s13 + s23) + e_ab;
  tri.rhs = 0.25;
  tri.evaluator = sum.evaluator;
  tri.terms = {{"EN2_A1A2", s12}, {"EN2_A1A3", s13}, {"EN2_A2A3", s23}, {"E_AB", e_ab}};

  out[0] = detail::finish_report(std::move(out[0]), r, tol);
  out[1] = detail::finish_report(std::move(out[1]), r, tol);
  return out;
}

// ---------------------------------------------------------------------------
// Three identical qubits in a permutation-symmetric pure state

struct ThreeQubitBounds {
  double uem = 0.0;
  double mei = 0.0;
};

/// Upper bounds on E1 = E_N(A1:A2) given E2 = E_N(A1:A2A3).
inline ThreeQubitBounds three_qubit_bounds(double e2) {
  if (!(e2 >= -1e-12 && e2 <= 0.5 + 1e-12)) throw Error(ErrorCode::OutOfRange, "E2 must lie in [0, 1/2]");
  e2 = std::clamp(e2, 0.0, 0.5);
  ThreeQubitBounds b;
  b.uem = std::sqrt(2.0) * e2 / 2.0;
  b.mei = (std::sqrt(std::max(0.0, 1.0 - 2.0 * e2 * e2)) + std::sqrt(std::max(0.0, 0.25 - e2 * e2)) - 0.5) / 2.0;
  return b;
}

/// Root of uem - mei on [0.3, 0.5] by bisection to 1e-9.
inline double find_crossover() {
  double lo = 0.3, hi = 0.5;
  auto diff = [](double e) {
    const auto b = three_qubit_bounds(e);
    return b.uem - b.mei;
  };
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct SymmetricScanRow {
  std::array<cplx, 4> coeffs{};
  double e1 = 0.0;
  double e2 = 0.0;
  ThreeQubitBounds bounds;
  /// True when the mei bound is the smaller one.
  bool mei_tighter = false;
  bool satisfied = true;
};

inline SymmetricScanRow symmetric_row(const std::array<cplx, 4>& coeffs) {
  const DensityMatrix rho = symmetric_three_qubit_pure(coeffs);
  SymmetricScanRow row;
  row.coeffs = coeffs;
  row.e1 = negativity(reduce(rho, {0, 1}), {2, 2});
  row.e2 = negativity(rho.with_factors({2, 4}), {2, 4});
  row.bounds = three_qubit_bounds(std::min(row.e2, 0.5));
  row.mei_tighter = row.bounds.mei < row.bounds.uem;
  row.satisfied = row.e1 <= std::min(row.bounds.uem, row.bounds.mei) + 1e-9;
  return row;
}

/// Real amplitudes on the unit 3-sphere, (t1, t2) in [0, pi/2] and
/// t3 in [0, pi], `grid` points per angle.
inline std::vector<SymmetricScanRow> symmetric_family_scan(int grid) {
  if (grid < 2) throw Error(ErrorCode::BadGrid, "scan needs at least 2 points per angle");
  const double pi = std::numbers::pi;
  std::vector<SymmetricScanRow> rows;
  rows.reserve(static_cast<std::size_t>(grid) * grid * grid);
  for (int i = 0; i < grid; ++i) {
    const double t1 = pi / 2 * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double t2 = pi / 2 * j / (grid - 1);
      for (int k = 0; k < grid; ++k) {
        const double t3 = pi * k / (grid - 1);
        const std::array<cplx, 4> c{std::cos(t1), std::sin(t1) * std::cos(t2), std::sin(t1) * std::sin(t2) * std::cos(t3),
                                    std::sin(t1) * std::sin(t2) * std::sin(t3)};
        rows.push_back(symmetric_row(c));
      }
    }
  }
  return rows;
}

}  // namespace qmono
