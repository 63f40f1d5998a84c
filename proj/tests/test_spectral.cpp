#include <gtest/gtest.h>

#include "ellipticity/spectral.hpp"
#include "test_util.hpp"

using namespace ellipticity;

namespace {

Mat9 random_sym9(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Mat9 m;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) m(r, c) = n(rng);
  return 0.5 * (m + m.transpose());
}

}  // namespace

TEST(Spectral, JacobiReconstructsAndOrthonormal) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    const Mat9 m = random_sym9(rng);
    const EigPair<9> e = sym_eig<9>(m);
    EXPECT_LT((e.vectors * e.values.asDiagonal() * e.vectors.transpose() - m).norm(), 1e-12 * m.norm());
    EXPECT_LT((e.vectors.transpose() * e.vectors - Mat9::Identity()).norm(), 1e-13);
    for (int i = 0; i + 1 < 9; ++i) EXPECT_LE(e.values(i), e.values(i + 1));
    for (int c = 0; c < 9; ++c) {
      Eigen::Index at;
      e.vectors.col(c).cwiseAbs().maxCoeff(&at);
      EXPECT_GT(e.vectors(at, c), 0.0);
    }
  }
}

TEST(Spectral, AgreesWithEigen) {
  std::mt19937_64 rng(12);
  for (int n = 0; n < 20; ++n) {
    const Mat9 m = random_sym9(rng);
    Eigen::SelfAdjointEigenSolver<Mat9> ref(m);
    EXPECT_LT((sym_eig<9>(m).values - ref.eigenvalues()).norm(), 1e-12 * m.norm());
  }
}

TEST(Spectral, Deterministic) {
  std::mt19937_64 rng(13);
  const Mat9 m = random_sym9(rng);
  const EigPair<9> a = sym_eig<9>(m), b = sym_eig<9>(m);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.vectors, b.vectors);
}

TEST(Spectral, ThreeByThreeKnown) {
  Mat3 m;
  m << 2, 1, 0, 1, 2, 0, 0, 0, 5;
  const EigPair<3> e = sym_eig<3>(m);
  EXPECT_NEAR(e.values(0), 1.0, 1e-15);
  EXPECT_NEAR(e.values(1), 3.0, 1e-15);
  EXPECT_NEAR(e.values(2), 5.0, 1e-15);
  EXPECT_NEAR(min_eigenvalue<3>(m), 1.0, 1e-15);
}

TEST(Spectral, PsdProjectionProperties) {
  std::mt19937_64 rng(14);
  for (int n = 0; n < 50; ++n) {
    const Mat9 m = random_sym9(rng);
    const Mat9 p = psd_project(m);
    EXPECT_EQ(p, p.transpose());
    EXPECT_GE(min_eigenvalue<9>(p), -1e-12);
    EXPECT_LT((psd_project(p) - p).norm(), 1e-12);
    // Residual m - p is negative semidefinite and orthogonal to p.
    EXPECT_LE(sym_eig<9>(m - p).values(8), 1e-12);
    EXPECT_NEAR((p.cwiseProduct(m - p)).sum(), 0.0, 1e-10);
  }
}

TEST(Spectral, PsdProjectionKeepsPsdInput) {
  std::mt19937_64 rng(15);
  const Mat9 g = random_sym9(rng);
  const Mat9 m = g * g;
  EXPECT_LT((psd_project(m) - m).norm(), 1e-12 * m.norm());
}
