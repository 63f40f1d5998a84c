#include <gtest/gtest.h>

#include <cmath>

#include "ellipticity/errors.hpp"
#include "ellipticity/tensor.hpp"
#include "test_util.hpp"

using namespace ellipticity;
using testutil::random_unit;

namespace {

double choi_lam_poly(const Vec3& x, const Vec3& y, double gamma) {
  const double x1 = x(0), x2 = x(1), x3 = x(2), y1 = y(0), y2 = y(1), y3 = y(2);
  return x1 * x1 * y1 * y1 + x2 * x2 * y2 * y2 + x3 * x3 * y3 * y3 -
         2 * (x1 * x2 * y1 * y2 + x2 * x3 * y2 * y3 + x3 * x1 * y3 * y1) +
         gamma * (x1 * x1 * y2 * y2 + x2 * x2 * y3 * y3 + x3 * x3 * y1 * y1);
}

bool has_elast4_symmetry(const Elast4& a) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          if (a(i, j, k, l) != a(j, i, k, l) || a(i, j, k, l) != a(i, j, l, k)) return false;
  return true;
}

}  // namespace

TEST(Tensor, SymmetrizedHasElast4SymmetryAndIsIdempotent) {
  std::mt19937_64 rng(1);
  for (int n = 0; n < 50; ++n) {
    const Elast4 a = Elast4::symmetrized(testutil::random_raw(rng));
    EXPECT_TRUE(has_elast4_symmetry(a));
    EXPECT_EQ(Elast4::symmetrized(a.entries()), a);
    EXPECT_EQ(Elast4::from_raw(a.entries(), 0.0), a);
  }
}

TEST(Tensor, FromRawRejectsAsymmetricInput) {
  RawTensor raw{};
  raw[flat_index(0, 1, 0, 0)] = 1.0;  // a_1211 without a_2111
  EXPECT_THROW(Elast4::from_raw(raw, 1e-9), SymmetryViolation);
  try {
    Elast4::from_raw(raw, 1e-9);
  } catch (const SymmetryViolation& e) {
    EXPECT_DOUBLE_EQ(e.spread(), 1.0);
  }
  EXPECT_NO_THROW(Elast4::from_raw(raw, 2.0));
}

TEST(Tensor, UnfoldFoldRoundTrip) {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 50; ++n) {
    const Pair4 t = Pair4::symmetrized(testutil::random_raw(rng));
    const Mat9 m = unfold(t);
    EXPECT_EQ(m, m.transpose());
    EXPECT_EQ(fold(m), t);
  }
}

TEST(Tensor, UnfoldIndexConvention) {
  RawTensor raw{};
  raw[flat_index(0, 1, 2, 0)] = 3.0;  // t_1231 (1-based)
  raw[flat_index(1, 0, 0, 2)] = 3.0;  // its weak-symmetry partner t_2113
  const Mat9 m = unfold(Pair4::from_raw(raw, 0.0));
  EXPECT_EQ(m(3 * 2 + 0, 3 * 0 + 1), 3.0);
  EXPECT_EQ(m(3 * 0 + 1, 3 * 2 + 0), 3.0);
}

TEST(Tensor, FoldRejectsAsymmetricMatrix) {
  Mat9 m = Mat9::Identity();
  m(0, 1) = 1.0;
  EXPECT_THROW(fold(m), AsymmetricInput);
}

TEST(Tensor, VectorizeIsColumnStacking) {
  Mat3 z;
  z << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const Vec9 v = vectorize(z);
  EXPECT_EQ(v(3 * 1 + 0), z(0, 1));
  EXPECT_EQ(v(3 * 2 + 1), z(1, 2));
  EXPECT_EQ(devectorize(v), z);
}

TEST(Tensor, BiquadraticConsistency) {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 100; ++n) {
    const Elast4 a = Elast4::symmetrized(testutil::random_raw(rng));
    const Vec3 x = random_unit(rng), y = random_unit(rng);
    const double f = biquadratic(a, x, y);
    EXPECT_NEAR(x.dot(contract_yy(a, y) * x), f, 1e-12);
    EXPECT_NEAR(contract_zz(a, Mat3(x * y.transpose())), f, 1e-12);
    const Mat3 ayy = contract_yy(a, y);
    EXPECT_NEAR((ayy - ayy.transpose()).norm(), 0.0, 1e-14);
    // Homogeneity: degree 2 in x and in y.
    EXPECT_NEAR(biquadratic(a, 2.0 * x, 3.0 * y), 36.0 * f, 1e-10);
  }
}

TEST(Tensor, PairContractionReportsAsymmetry) {
  std::mt19937_64 rng(4);
  const Pair4 t = Pair4::symmetrized(testutil::random_raw(rng));
  const PairContraction c = contract_yy(t, random_unit(rng));
  EXPECT_GT(c.asymmetry, 0.0);
  EXPECT_NEAR((c.matrix - c.matrix.transpose()).norm(), 0.0, 1e-15);
}

TEST(Tensor, SymmetrizationPreservesTheForm) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 20; ++n) {
    const Pair4 t = Pair4::symmetrized(testutil::random_raw(rng));
    const Elast4 a = Elast4::symmetrized(t.entries());
    const Vec3 x = random_unit(rng), y = random_unit(rng);
    EXPECT_NEAR(biquadratic(a, x, y), biquadratic(t, x, y), 1e-12);
  }
}

TEST(Tensor, EUnfoldsToIdentity) {
  const Elast4 e = tensor_E();
  EXPECT_EQ(unfold(e), Mat9::Identity());
  std::mt19937_64 rng(6);
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(biquadratic(e, random_unit(rng), random_unit(rng)), 1.0, 1e-15);
}

TEST(Tensor, ChoiLamMatchesPolynomial) {
  std::mt19937_64 rng(7);
  for (double gamma : {0.5, 1.0, 2.0}) {
    const Elast4 a = tensor_choi_lam(gamma);
    EXPECT_EQ(a(0, 0, 0, 0), 1.0);
    EXPECT_EQ(a(0, 1, 0, 1), -0.5);
    EXPECT_EQ(a(0, 0, 1, 1), gamma);
    EXPECT_EQ(a(1, 1, 2, 2), gamma);
    EXPECT_EQ(a(2, 2, 0, 0), gamma);
    EXPECT_EQ(a(1, 1, 0, 0), 0.0);
    for (int n = 0; n < 20; ++n) {
      const Vec3 x = random_unit(rng), y = random_unit(rng);
      EXPECT_NEAR(biquadratic(a, x, y), choi_lam_poly(x, y, gamma), 1e-14);
    }
  }
  EXPECT_TRUE(choi_lam_in_regime(1.0));
  EXPECT_FALSE(choi_lam_in_regime(0.9));
}

TEST(Tensor, ChoiLamVanishesAtOnesVector) {
  const Vec3 u = Vec3::Ones() / std::sqrt(3.0);
  EXPECT_NEAR(biquadratic(tensor_choi_lam(1.0), u, u), 0.0, 1e-15);
}

TEST(Tensor, IsotropicForm) {
  std::mt19937_64 rng(8);
  for (double lambda : {-3.0, 0.0, 2.0})
    for (double mu : {0.1, 1.0}) {
      const Elast4 a = tensor_isotropic(lambda, mu);
      for (int n = 0; n < 10; ++n) {
        const Vec3 x = random_unit(rng), y = random_unit(rng);
        const double c = x.dot(y);
        EXPECT_NEAR(biquadratic(a, x, y), mu + (lambda + mu) * c * c, 1e-13);
      }
      EXPECT_NEAR(biquadratic(a, Vec3::UnitX(), Vec3::UnitX()), lambda + 2 * mu, 1e-14);
      EXPECT_NEAR(biquadratic(a, Vec3::UnitX(), Vec3::UnitY()), mu, 1e-14);
    }
}

TEST(Tensor, CounterexampleFormAndEntries) {
  const Elast4 a = tensor_mpsd_not_spsd();
  EXPECT_EQ(a(0, 0, 0, 0), 2.0);
  EXPECT_EQ(a(2, 2, 2, 2), 2.0);
  EXPECT_EQ(a(0, 1, 0, 1), 1.0);
  EXPECT_EQ(a(1, 0, 1, 0), 1.0);
  std::mt19937_64 rng(9);
  for (int n = 0; n < 20; ++n) {
    const Vec3 x = random_unit(rng), y = random_unit(rng);
    const double p = x(0) * y(0) + x(1) * y(1);
    EXPECT_NEAR(biquadratic(a, x, y), 2 * p * p + 2 * x(2) * x(2) * y(2) * y(2), 1e-14);
  }
}

TEST(Tensor, OrbitSpread) {
  std::mt19937_64 rng(10);
  EXPECT_EQ(elast4_orbit_spread(tensor_choi_lam(1.0).entries()), 0.0);
  EXPECT_GT(elast4_orbit_spread(testutil::random_raw(rng)), 0.0);
}
