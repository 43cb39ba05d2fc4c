#include <cmath>

#include <gtest/gtest.h>

#include "liewe/catalog3d.hpp"

using namespace liewe;

namespace {

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& err) {
    return err.code();
  }
  ADD_FAILURE() << "no error raised";
  return Errc::io;
}

VectorXd e(int i) { return VectorXd::Unit(3, i); }

Family3D gt(double t, double mu, double nu) { return {Family::Gt, t, MetricShape::Hmunu, mu, nu}; }

}  // namespace

TEST(Make3d, Examples) {
  const auto R = make_3d({Family::RIdR2, 0.0, MetricShape::Gnu, 1.0, 1.0});
  EXPECT_TRUE(R.algebra().bracket_basis(2, 0).isApprox(e(0)));
  EXPECT_TRUE(R.algebra().bracket_basis(2, 1).isApprox(e(1)));
  EXPECT_EQ(R.metric(), MatrixXd::Identity(3, 3));

  const auto G = make_3d(gt(2.0, 2.0, 1.0));
  EXPECT_EQ(G.metric()(0, 1), 1.0);
  EXPECT_EQ(G.metric()(1, 0), 1.0);
  EXPECT_EQ(G.metric()(1, 1), 2.0);
  EXPECT_EQ(G.metric()(2, 2), 1.0);
  // [z,x] = y, [z,y] = -t x + 2 y
  EXPECT_TRUE(G.algebra().bracket_basis(2, 0).isApprox(e(1)));
  EXPECT_TRUE(G.algebra().bracket_basis(2, 1).isApprox(Eigen::Vector3d(-2, 2, 0)));

  const auto A = make_3d({Family::Abelian, 0.0, MetricShape::Std});
  EXPECT_EQ(A.algebra().max_abs(), 0.0);
  EXPECT_EQ(A.metric(), MatrixXd::Identity(3, 3));
}

TEST(Make3d, MetricShapes) {
  const auto M = metric_3d(MetricShape::Mnu, 1.0, 3.0);
  EXPECT_EQ(M(0, 1), 0.5);
  EXPECT_EQ(M(2, 2), 3.0);
  const auto G = metric_3d(MetricShape::Gmunu, 0.5, 2.0);
  EXPECT_EQ(G, Eigen::Vector3d(1, 0.5, 2).asDiagonal().toDenseMatrix());
  const auto N = metric_3d(MetricShape::Gnu, 7.0, 2.0);
  EXPECT_EQ(N, Eigen::Vector3d(1, 1, 2).asDiagonal().toDenseMatrix());
}

TEST(Make3d, RangeErrors) {
  EXPECT_EQ(code_of([] { make_3d({Family::RIdR2, 0.0, MetricShape::Gnu, 1.0, 0.0}); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d({Family::SO2R2, 0.0, MetricShape::Gmunu, 1.5, 1.0}); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d({Family::SO2R2, 0.0, MetricShape::Gmunu, 0.0, 1.0}); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d(gt(2.0, 2.5, 1.0)); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d(gt(2.0, 1.0, 1.0)); }), Errc::input);  // h_{1,nu} is degenerate
  EXPECT_EQ(code_of([] { make_3d(gt(0.5, 0.4, 1.0)); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d({Family::Gt, 0.0, MetricShape::Hmunu, 2.0, 1.0}); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d({Family::RIdR2, 0.0, MetricShape::Mnu, 1.0, 1.0}); }), Errc::input);
  EXPECT_EQ(code_of([] { make_3d({Family::Sol, 0.0, MetricShape::Std, NAN, 1.0}); }), Errc::numeric_input);
}

TEST(Buv, Examples) {
  const auto r = buv_normal_form(make_3d({Family::RIdR2, 0.0, MetricShape::Gnu, 1.0, 1.0}));
  EXPECT_EQ(r.which, BuvCase::AdbForm);
  EXPECT_NEAR(r.k, 1.0, 1e-12);
  EXPECT_NEAR(r.l, 0.0, 1e-12);

  const auto g = buv_normal_form(make_3d(gt(2.0, 2.0, 1.0)));
  EXPECT_EQ(g.which, BuvCase::AdbForm);
  EXPECT_NEAR(g.k, 1.0, 1e-12);
  EXPECT_NEAR(g.l, 1.0, 1e-12);

  const auto d = buv_normal_form(make_3d({Family::Gt, 0.0, MetricShape::Mnu, 1.0, 1.0}));
  EXPECT_EQ(d.which, BuvCase::DirForm);
  EXPECT_NEAR(d.alpha, 2.0, 1e-12);
}

TEST(Buv, ProofSubstitutions) {
  for (double t : {1.5, 2.0, 5.0})
    for (double nu : {0.5, 1.0, 2.0}) {
      const auto f = buv_normal_form(make_3d(gt(t, t, nu)));
      EXPECT_NEAR(f.k, 1.0 / std::sqrt(nu), 1e-10);
      EXPECT_NEAR(f.l, f.k * std::sqrt(t - 1.0), 1e-10);
    }
  for (double nu : {0.5, 1.0, 2.0}) {
    const auto f = buv_normal_form(make_3d({Family::Gt, 0.0, MetricShape::Mnu, 1.0, nu}));
    EXPECT_NEAR(f.alpha, 2.0 / std::sqrt(nu), 1e-10);
  }
}

TEST(Buv, BracketsInNewBasis) {
  for (const auto& f : {gt(2.0, 2.0, 0.5), Family3D{Family::RIdR2, 0, MetricShape::Gnu, 1, 2},
                        Family3D{Family::SO2R2, 0, MetricShape::Gmunu, 1, 2},
                        Family3D{Family::Gt, 0, MetricShape::Mnu, 1, 2}}) {
    const auto M = make_3d(f);
    const auto nf = buv_normal_form(M);
    const MatrixXd& P = nf.basis_change;
    EXPECT_LE((P.transpose() * M.metric() * P - MatrixXd::Identity(3, 3)).norm(), 1e-10);
    const LieAlgebra L = change_basis(M.algebra(), P);  // basis (b, u, v)
    Eigen::Vector3d bu, bv;
    if (nf.which == BuvCase::AdbForm) {
      bu << 0, nf.k, -nf.l;
      bv << 0, nf.l, nf.k;
    } else {
      bu << 0, nf.alpha, 0;
      bv.setZero();
    }
    EXPECT_LE((L.bracket_basis(0, 1) - bu).norm(), 1e-10);
    EXPECT_LE((L.bracket_basis(0, 2) - bv).norm(), 1e-10);
    EXPECT_LE(L.bracket_basis(1, 2).norm(), 1e-10);
  }
}

TEST(Buv, NoNormalFormWithoutWE) {
  EXPECT_EQ(code_of([] { buv_normal_form(make_3d({Family::Sol, 0, MetricShape::Std})); }), Errc::classification);
  EXPECT_EQ(code_of([] { buv_normal_form(make_3d({Family::SO2R2, 0, MetricShape::Gmunu, 0.5, 1})); }),
            Errc::classification);
}

TEST(Buv, RebuildIsIsometric) {
  std::vector<Family3D> grid;
  for (double nu : {0.5, 1.0, 2.0}) {
    grid.push_back({Family::RIdR2, 0, MetricShape::Gnu, 1, nu});
    grid.push_back({Family::SO2R2, 0, MetricShape::Gmunu, 1, nu});
    grid.push_back({Family::Gt, 0, MetricShape::Mnu, 1, nu});
    for (double t : {1.5, 2.0, 5.0}) grid.push_back(gt(t, t, nu));
  }
  for (const auto& f : grid) {
    const auto M = make_3d(f);
    const auto R = rebuild_from_normal_form(buv_normal_form(M));
    const auto a = ricci(M), b = ricci(R);
    EXPECT_NEAR(a.scalar, b.scalar, M.tau_num() * (1 + std::abs(a.scalar)));
    EXPECT_LE((ricci_spectrum(M, a.ricci) - ricci_spectrum(R, b.ricci)).norm(), M.tau_num() * (1 + a.ricci.norm()));
  }
}

TEST(Cl3, Examples) {
  const auto so = cl3_admits_we({Family::SO2R2, 0, MetricShape::Gmunu, 1.0, 2.0});
  EXPECT_TRUE(so.admits);
  ASSERT_EQ(so.lee_forms.size(), 1u);
  EXPECT_LE(so.lee_forms[0].theta.norm(), 1e-9);

  const auto no = cl3_admits_we({Family::SO2R2, 0, MetricShape::Gmunu, 0.5, 1.0});
  EXPECT_FALSE(no.admits);
  EXPECT_TRUE(no.lee_forms.empty());

  const auto g = cl3_admits_we(gt(2.0, 2.0, 1.0));
  EXPECT_TRUE(g.admits);
  ASSERT_EQ(g.lee_forms.size(), 2u);
  const auto nf = buv_normal_form(make_3d(gt(2.0, 2.0, 1.0)));
  const auto M = make_3d(gt(2.0, 2.0, 1.0));
  const VectorXd bflat = M.lower(nf.basis_change.col(0));
  EXPECT_LE((g.lee_forms[1].theta - nf.k * bflat).norm(), 1e-8);
}

TEST(Cl3, SolNeverAdmits) {
  for (const auto shape : {MetricShape::Std, MetricShape::Gnu, MetricShape::Gmunu, MetricShape::Mnu}) {
    const auto v = cl3_admits_we({Family::Sol, 0, shape, 0.7, 1.3});
    EXPECT_FALSE(v.admits);
    EXPECT_FALSE(v.by_solver);
  }
  const auto h = cl3_admits_we({Family::Sol, 0, MetricShape::Hmunu, 2.0, 1.3});
  EXPECT_FALSE(h.admits);
}

TEST(Cl3, TableAndSolverAgreeOnGrid) {
  for (double t : {1.5, 2.0, 5.0})
    for (int i = 1; i <= 8; ++i)
      for (double nu : {0.5, 1.0, 2.0}) {
        const double mu = 1.0 + (t - 1.0) * i / 8.0;
        const Family3D f = gt(t, i == 8 ? t : mu, nu);
        EXPECT_NO_THROW({
          const auto v = cl3_admits_we(f);
          EXPECT_EQ(v.admits, i == 8);
        });
      }
}
