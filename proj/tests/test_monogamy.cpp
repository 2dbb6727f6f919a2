#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qmono/harness.hpp"
#include "qmono/monogamy.hpp"
#include "test_util.hpp"

using namespace qmono;
using testutil::basis_vec;
using testutil::bell;
using testutil::code_of;

namespace {

const double ln2 = std::numbers::ln2;
const double r2 = 1.0 / std::sqrt(2.0);

DensityMatrix ghz() { return symmetric_three_qubit_pure({r2, 0.0, 0.0, r2}); }
DensityMatrix w_state() { return symmetric_three_qubit_pure({0.0, 1.0, 0.0, 0.0}); }

Vector vec_of(const DensityMatrix& pure) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(pure.data());
  return es.eigenvectors().col(pure.dim() - 1);
}

DensityMatrix product(const DensityMatrix& a, const Vector& b, std::vector<int> factors) {
  return DensityMatrix::from_pure(kron(vec_of(a), b), std::move(factors));
}

}  // namespace

TEST(ResourceMonogamy, ProductStateHasNoEntanglementTerm) {
  Rng rng(71);
  const Vector a = random_state_vector(3, rng), b = random_state_vector(2, rng);
  const auto rho = DensityMatrix::from_pure(kron(a, b), {3, 2});
  const auto m = MeasureDescriptor::coherence_computational(3);
  const auto rep = check_resource_monogamy(rho, {3, 2}, m, EntanglementEvaluator(m));
  EXPECT_NEAR(rep.terms[1].second, 0.0, 1e-12);
  EXPECT_LE(rep.lhs, std::log(3.0) + 1e-12);
  EXPECT_FALSE(rep.violated);
  EXPECT_EQ(rep.evaluator, "coherence/pure-reduction");
}

TEST(ResourceMonogamy, DephasingExamples) {
  DephasingParams p{0.8, 0.0, 2, 0.0};
  const auto rho = dephasing_state(p);
  const auto comp = MeasureDescriptor::coherence_computational(2);
  const auto a = check_resource_monogamy(rho, {2, 2}, comp, EntanglementEvaluator(comp));
  EXPECT_NEAR(a.lhs, binary_entropy(0.8), 1e-10);
  const auto rot = MeasureDescriptor::coherence(rotated_basis(std::numbers::pi / 4));
  const auto b = check_resource_monogamy(rho, {2, 2}, rot, EntanglementEvaluator(rot));
  EXPECT_NEAR(b.lhs, ln2, 1e-10);
  EXPECT_NEAR(b.slack, 0.0, 1e-10);
  EXPECT_FALSE(b.violated);
}

TEST(ResourceMonogamy, MixedTwoQubitUsesWootters) {
  Rng rng(72);
  const auto rho = random_density_matrix(4, 3, rng, {2, 2});
  const auto m = MeasureDescriptor::nonuniformity_vn(2);
  const auto rep = check_resource_monogamy(rho, {2, 2}, m, EntanglementEvaluator(m));
  EXPECT_EQ(rep.evaluator, "nonuniformity:vn/wootters");
  EXPECT_FALSE(rep.approximate);
  EXPECT_NEAR(rep.terms[1].second, eof_wootters(rho), 1e-12);
  EXPECT_EQ(code_of([&] { check_resource_monogamy(rho, {2, 2}, MeasureDescriptor::nonuniformity_vn(3),
                                                  EntanglementEvaluator(m)); }),
            ErrorCode::DimensionMismatch);
}

TEST(ResourceMonogamy, ConvexRoofFlaggedApproximate) {
  Rng rng(73);
  const auto rho = random_density_matrix(6, 2, rng, {2, 3});
  const auto m = MeasureDescriptor::nonuniformity_tsallis(2, 2.0);
  RoofConfig roof;
  roof.restarts = 2;
  const auto rep = check_resource_monogamy(rho, {2, 3}, m, EntanglementEvaluator(m, roof));
  EXPECT_TRUE(rep.approximate);
  EXPECT_EQ(rep.tol, kRoofTol);
  EXPECT_FALSE(rep.violated);
}

TEST(ResourceMonogamy, ViolationFlagFollowsSlack) {
  Rng rng(74);
  for (int t = 0; t < 200; ++t) {
    const auto rho = random_pure_state(4, rng, {2, 2});
    const auto m = MeasureDescriptor::nonuniformity_renyi(2, 0.5);
    const auto rep = check_resource_monogamy(rho, {2, 2}, m, EntanglementEvaluator(m));
    EXPECT_NEAR(rep.slack, rep.rhs - rep.lhs, 1e-15);
    EXPECT_EQ(rep.violated, rep.slack < -rep.tol);
    EXPECT_EQ(rep.state_fingerprint, fingerprint(rho.data()));
  }
}

TEST(EntanglementMonogamy, BellTimesPureB) {
  const auto rho = product(bell(), basis_vec(3, 1), {2, 2, 3});
  const auto rep = check_entanglement_monogamy(rho, {2, 2, 3});
  EXPECT_NEAR(rep.lhs, 0.5, 1e-12);
  EXPECT_NEAR(rep.terms[1].second, 0.0, 1e-12);
  EXPECT_NEAR(rep.slack, 0.0, 1e-12);
  EXPECT_FALSE(rep.violated);
}

TEST(EntanglementMonogamy, MaximallyMixedA) {
  Vector psi = Vector::Zero(16);
  for (int i = 0; i < 4; ++i) psi(5 * i) = 0.5;
  const auto rep = check_entanglement_monogamy(DensityMatrix::from_pure(psi), {2, 2, 4});
  EXPECT_NEAR(rep.terms[0].second, 0.0, 1e-12);
  EXPECT_NEAR(rep.terms[1].second, 0.5, 1e-12);
  EXPECT_NEAR(rep.slack, 0.0, 1e-12);
  EXPECT_EQ(code_of([&] { check_entanglement_monogamy(DensityMatrix::from_pure(psi), {4, 1, 4}); }),
            ErrorCode::DimensionMismatch);
}

TEST(EntanglementMonogamy, RandomPureStatesProperty) {
  Rng rng(75);
  for (int t = 0; t < 1000; ++t) EXPECT_FALSE(check_entanglement_monogamy(random_pure_state(16, rng), {2, 2, 4}).violated);
}

TEST(NegativityG, Examples) {
  Vector psi = Vector::Zero(16);
  for (int i = 0; i < 4; ++i) psi(5 * i) = 0.5;
  const auto max = check_negativity_g(DensityMatrix::from_pure(psi), {2, 2, 4});
  EXPECT_NEAR(max.terms[2].second, 0.5, 1e-9);
  EXPECT_NEAR(max.terms[0].second, 0.0, 1e-12);
  EXPECT_FALSE(max.violated);

  const auto prod = check_negativity_g(product(bell(), basis_vec(2, 0), {2, 2, 2}), {2, 2, 2});
  EXPECT_NEAR(prod.terms[2].second, 0.0, 1e-12);
  EXPECT_NEAR(prod.lhs, 0.5, 1e-12);
  EXPECT_EQ(prod.evaluator, "g-closed-form:d*=2");
  EXPECT_EQ(code_of([&] { check_negativity_g(bell(), {2, 2, 1}); }), ErrorCode::UnsupportedDStar);
}

TEST(NegativityG, RandomPureStatesProperty) {
  Rng rng(76);
  for (int db = 2; db <= 5; ++db)
    for (int t = 0; t < 300; ++t) EXPECT_FALSE(check_negativity_g(random_pure_state(4 * db, rng), {2, 2, db}).violated) << db;
}

TEST(UsualMonogamy, Examples) {
  const auto g = check_usual_monogamy(ghz());
  EXPECT_NEAR(g.lhs, 0.0, 1e-12);
  EXPECT_NEAR(g.rhs, 0.25, 1e-12);

  const auto w = check_usual_monogamy(w_state());
  const double en = (std::sqrt(5.0) - 1.0) / 6.0;
  EXPECT_NEAR(w.terms[0].second, en, 1e-12);
  EXPECT_NEAR(w.terms[1].second, en, 1e-12);
  EXPECT_NEAR(w.lhs, 2 * en * en, 1e-12);
  EXPECT_NEAR(w.rhs, 2.0 / 9.0, 1e-12);
  EXPECT_FALSE(w.violated);

  const auto zero = check_usual_monogamy(DensityMatrix::from_pure(basis_vec(8, 0)));
  EXPECT_NEAR(zero.lhs, 0.0, 1e-12);
  EXPECT_NEAR(zero.rhs, 0.0, 1e-12);
  EXPECT_FALSE(zero.violated);

  EXPECT_EQ(code_of([] { check_usual_monogamy(DensityMatrix(Matrix(Matrix::Identity(8, 8) / 8.0))); }), ErrorCode::NotPure);
  EXPECT_EQ(code_of([] { check_usual_monogamy(DensityMatrix::from_pure(basis_vec(9, 0))); }), ErrorCode::DimensionMismatch);
}

TEST(UsualMonogamy, MatchesOracleNegativities) {
  Rng rng(77);
  for (int t = 0; t < 200; ++t) {
    const Vector psi = random_state_vector(8, rng);
    const auto rep = check_usual_monogamy(DensityMatrix::from_pure(psi));
    const Matrix full = psi * psi.adjoint();
    EXPECT_NEAR(rep.terms[0].second, oracle::negativity_b(oracle::trace_out_b(full, 4, 2), 2, 2), 1e-10);
    EXPECT_NEAR(rep.terms[2].second, oracle::negativity_b(full, 2, 4), 1e-10);
    EXPECT_FALSE(rep.violated);
  }
}

TEST(CombinedNParty, Examples) {
  const auto reps = check_combined_n_party(product(ghz(), basis_vec(2, 0), {2, 2, 2, 2}), 3, 2);
  EXPECT_NEAR(reps[0].lhs, 0.0, 1e-12);
  EXPECT_NEAR(reps[1].lhs, 0.0, 1e-12);
  EXPECT_EQ(reps[0].id, InequalityId::NPartySum);
  EXPECT_EQ(reps[1].id, InequalityId::NPartyTriangle);

  const auto w = check_combined_n_party(product(w_state(), basis_vec(3, 2), {2, 2, 2, 3}), 3, 3);
  const double en = (std::sqrt(5.0) - 1.0) / 6.0;
  EXPECT_NEAR(w[0].lhs, 2 * en * en, 1e-12);
  EXPECT_NEAR(w[1].lhs, 2.0 * en * en, 1e-12);
  EXPECT_FALSE(w[0].violated);

  EXPECT_EQ(code_of([] { check_combined_n_party(ghz(), 4, 1); }), ErrorCode::Unsupported);
  Rng rng(78);
  EXPECT_EQ(code_of([&] { check_combined_n_party(random_pure_state(32, rng), 3, 4); }), ErrorCode::Unsupported);
}

TEST(CombinedNParty, RandomPureStatesProperty) {
  Rng rng(79);
  for (int t = 0; t < 1000; ++t) {
    const auto reps = check_combined_n_party(random_pure_state(16, rng), 3, 2);
    EXPECT_FALSE(reps[0].violated);
    EXPECT_FALSE(reps[1].violated);
  }
}

TEST(ThreeQubitBounds, Examples) {
  const auto zero = three_qubit_bounds(0.0);
  EXPECT_NEAR(zero.uem, 0.0, 1e-15);
  // (1 + 1/2 - 1/2) / 2
  EXPECT_NEAR(zero.mei, 0.5, 1e-15);
  const auto half = three_qubit_bounds(0.5);
  EXPECT_NEAR(half.uem, std::sqrt(2.0) / 4.0, 1e-15);
  EXPECT_NEAR(half.mei, (std::sqrt(0.5) - 0.5) / 2.0, 1e-15);
  EXPECT_EQ(code_of([] { three_qubit_bounds(0.6); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { three_qubit_bounds(-0.1); }), ErrorCode::OutOfRange);
}

TEST(ThreeQubitBounds, MeiIsHalfMinusG2) {
  for (double e = 0.0; e <= 0.5; e += 0.01) EXPECT_NEAR(three_qubit_bounds(e).mei, 0.5 - g_analytic(2, e), 1e-12);
}

TEST(Crossover, Bracket) {
  EXPECT_LT(three_qubit_bounds(0.3).uem, three_qubit_bounds(0.3).mei);
  EXPECT_GT(three_qubit_bounds(0.45).uem, three_qubit_bounds(0.45).mei);
  const double x = find_crossover();
  EXPECT_NEAR(x, 0.415, 1e-3);
  const auto b = three_qubit_bounds(x);
  EXPECT_NEAR(b.uem, b.mei, 1e-8);
}

TEST(SymmetricScan, Examples) {
  const auto g = symmetric_row({r2, 0.0, 0.0, r2});
  EXPECT_NEAR(g.e2, 0.5, 1e-12);
  EXPECT_NEAR(g.e1, 0.0, 1e-12);
  EXPECT_TRUE(g.mei_tighter);
  const auto w = symmetric_row({0.0, 1.0, 0.0, 0.0});
  EXPECT_TRUE(w.satisfied);
  EXPECT_LE(w.e1, w.bounds.uem);
  // The W state sits exactly on the mei bound: (sqrt(5) - 1)/6 at E2 = sqrt(2)/3.
  EXPECT_NEAR(w.e2, std::sqrt(2.0) / 3.0, 1e-12);
  EXPECT_NEAR(w.e1, w.bounds.mei, 1e-12);
  const auto z = symmetric_row({1.0, 0.0, 0.0, 0.0});
  EXPECT_NEAR(z.e1, 0.0, 1e-12);
  EXPECT_NEAR(z.e2, 0.0, 1e-12);
}

TEST(SymmetricScan, AllRowsSatisfied) {
  const auto rows = symmetric_family_scan(12);
  EXPECT_EQ(rows.size(), 12u * 12u * 12u);
  int mei = 0;
  for (const auto& r : rows) {
    EXPECT_TRUE(r.satisfied);
    mei += r.mei_tighter;
  }
  EXPECT_GT(mei, 0);
  EXPECT_EQ(code_of([] { symmetric_family_scan(1); }), ErrorCode::BadGrid);
}

TEST(InequalityId, Names) {
  EXPECT_EQ(to_string(InequalityId::Resource), "resource");
  EXPECT_EQ(to_string(InequalityId::NegativityG), "negativity-g");
  EXPECT_EQ(to_string(InequalityId::NPartyTriangle), "n-party-triangle");
}
