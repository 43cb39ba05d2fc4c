#include <gtest/gtest.h>

#include "liewe/catalog3d.hpp"
#include "liewe/liealg.hpp"
#include "support/generators.hpp"

using namespace liewe;
using liewe::testing::unit;

namespace {

LieAlgebra sol() { return algebra_3d(Family::Sol, 0.0); }
LieAlgebra heis() { return liewe::testing::heisenberg3(); }

}  // namespace

TEST(Validate, HeisenbergIsValid) { EXPECT_TRUE(validate_algebra(heis()).ok()); }

TEST(Validate, SolIsValid) { EXPECT_TRUE(validate_algebra(sol()).ok()); }

TEST(Validate, BrokenJacobiReportsTripleAndMagnitude) {
  // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e1
  const auto L = LieAlgebra::from_brackets(3, {{0, 1, unit(3, 2)}, {1, 2, unit(3, 0)}, {2, 0, unit(3, 0)}});
  const auto rep = validate_algebra(L);
  ASSERT_FALSE(rep.ok());
  const auto& v = rep.violations.front();
  EXPECT_EQ(v.i, 0);
  EXPECT_EQ(v.j, 1);
  EXPECT_EQ(v.k, 2);
  EXPECT_NEAR(v.magnitude, 1.0, 1e-12);
  EXPECT_NEAR(v.residual(2), 1.0, 1e-12);
  EXPECT_NEAR(v.residual(0), 0.0, 1e-12);
  EXPECT_NEAR(v.residual(1), 0.0, 1e-12);
}

TEST(Validate, NonFiniteEntriesAreRejected) {
  Tensor3 c(3);
  c(0, 1, 2) = std::numeric_limits<double>::quiet_NaN();
  try {
    validate_algebra(LieAlgebra(std::move(c)));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::numeric_input);
  }
}

TEST(Validate, AntisymmetryViolationIsReported) {
  Tensor3 c(2);
  c(0, 0, 1) = 1.0;  // no matching c(0,1,0) = -1
  EXPECT_FALSE(validate_algebra(LieAlgebra(std::move(c))).ok());
}

TEST(Flags, Heisenberg) {
  const auto f = structure_flags(heis());
  EXPECT_TRUE(f.solvable);
  EXPECT_TRUE(f.nilpotent);
  EXPECT_FALSE(f.abelian);
  EXPECT_TRUE(f.unimodular);
  EXPECT_EQ(f.derived_dim, 1);
  EXPECT_EQ(f.center_dim, 1);
}

TEST(Flags, Sol) {
  const auto f = structure_flags(sol());
  EXPECT_TRUE(f.solvable);
  EXPECT_FALSE(f.nilpotent);
  EXPECT_TRUE(f.unimodular);
  EXPECT_EQ(f.derived_dim, 2);
  EXPECT_EQ(f.center_dim, 0);
}

TEST(Flags, RIdR2NotUnimodular) {
  const auto L = algebra_3d(Family::RIdR2, 0.0);
  const auto f = structure_flags(L);
  EXPECT_TRUE(f.solvable);
  EXPECT_FALSE(f.nilpotent);
  EXPECT_FALSE(f.unimodular);
  EXPECT_DOUBLE_EQ(ad_basis(L, 2).trace(), 2.0);
}

TEST(Flags, AbelianAndSimple) {
  const auto a = structure_flags(LieAlgebra::abelian(4));
  EXPECT_TRUE(a.abelian && a.nilpotent && a.solvable && a.unimodular);
  EXPECT_EQ(a.center_dim, 4);
  const auto s = structure_flags(liewe::testing::so3());
  EXPECT_FALSE(s.solvable);
  EXPECT_EQ(s.derived_dim, 3);
  EXPECT_TRUE(s.unimodular);
}

TEST(Flags, SmallDimensionsAccepted) {
  EXPECT_TRUE(structure_flags(LieAlgebra::abelian(1)).abelian);
  const auto aff = LieAlgebra::from_brackets(2, {{0, 1, unit(2, 1)}});
  const auto f = structure_flags(aff);
  EXPECT_TRUE(f.solvable);
  EXPECT_FALSE(f.nilpotent);
  EXPECT_FALSE(f.unimodular);
}

TEST(AdMatrix, Examples) {
  EXPECT_EQ(ad_matrix(LieAlgebra::abelian(3), VectorXd::Ones(3)), MatrixXd::Zero(3, 3));
  const MatrixXd adz = ad_basis(sol(), 2);
  MatrixXd expect = MatrixXd::Zero(3, 3);
  expect(0, 0) = 1.0;
  expect(1, 1) = -1.0;
  EXPECT_TRUE(adz.isApprox(expect));
  const MatrixXd ad1 = ad_basis(heis(), 0);
  MatrixXd e = MatrixXd::Zero(3, 3);
  e(2, 1) = 1.0;
  EXPECT_EQ(ad1, e);
}

TEST(AdMatrix, LengthMismatch) {
  try {
    ad_matrix(sol(), VectorXd::Ones(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::structural);
  }
}

TEST(LieAlgProperty, AdIsAHomomorphism) {
  liewe::testing::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = liewe::testing::uniform_int(rng, 3, 6);
    const auto M = liewe::testing::random_metric_lie_algebra(rng, n);
    const auto& L = M.algebra();
    const double tol = kTauAlg * std::pow(L.scale(), 2) * 10;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const MatrixXd lhs = ad_matrix(L, L.bracket_basis(i, j));
        const MatrixXd rhs = ad_basis(L, i) * ad_basis(L, j) - ad_basis(L, j) * ad_basis(L, i);
        EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), tol);
      }
  }
}

TEST(LieAlgProperty, NilpotentIffEveryAdNilpotent) {
  liewe::testing::Rng rng(12);
  std::vector<LieAlgebra> algs{heis(), liewe::testing::filiform(4), liewe::testing::filiform(5),
                               liewe::testing::free_two_step3(), sol(), algebra_3d(Family::RIdR2, 0),
                               algebra_3d(Family::Gt, 2.0), liewe::testing::so3()};
  for (int i = 0; i < 10; ++i) algs.push_back(liewe::testing::random_semidirect(rng, 4));
  for (const auto& L : algs) {
    const int n = L.dim();
    bool all_nil = true;
    for (int i = 0; i < n; ++i) {
      MatrixXd p = ad_basis(L, i);
      for (int k = 1; k < n; ++k) p = p * ad_basis(L, i);
      all_nil = all_nil && p.cwiseAbs().maxCoeff() < 1e-9;
    }
    EXPECT_EQ(all_nil, structure_flags(L).nilpotent);
  }
}

TEST(LieAlgProperty, FlagsInvariantUnderBasisChange) {
  liewe::testing::Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = liewe::testing::uniform_int(rng, 3, 6);
    const auto M = liewe::testing::random_metric_lie_algebra(rng, n);
    const auto a = structure_flags(M.algebra());
    const auto b = structure_flags(change_basis(M.algebra(), liewe::testing::random_basis_change(rng, n)));
    EXPECT_EQ(a.solvable, b.solvable);
    EXPECT_EQ(a.nilpotent, b.nilpotent);
    EXPECT_EQ(a.abelian, b.abelian);
    EXPECT_EQ(a.unimodular, b.unimodular);
    EXPECT_EQ(a.derived_dim, b.derived_dim);
    EXPECT_EQ(a.center_dim, b.center_dim);
  }
}

TEST(LieAlgProperty, FlagImplications) {
  liewe::testing::Rng rng(14);
  for (int trial = 0; trial < 60; ++trial) {
    const auto M = liewe::testing::random_metric_lie_algebra(rng, liewe::testing::uniform_int(rng, 3, 6));
    const auto f = structure_flags(M.algebra());
    if (f.abelian) EXPECT_TRUE(f.nilpotent);
    if (f.nilpotent) EXPECT_TRUE(f.solvable);
  }
}
