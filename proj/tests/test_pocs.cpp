#include <gtest/gtest.h>

#include "ellipticity/errors.hpp"
#include "ellipticity/generators.hpp"
#include "ellipticity/pocs.hpp"
#include "ellipticity/spectral.hpp"
#include "test_util.hpp"

using namespace ellipticity;
using testutil::random_unit;

namespace {

bool in_T(const Elast4& ref, const Pair4& t, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          if (std::abs(t(i, j, k, l) - t(j, i, l, k)) > tol) return false;
          if (std::abs(t(i, j, k, l) + t(j, i, k, l) - 2 * ref(i, j, k, l)) > tol) return false;
        }
  return true;
}

}  // namespace

TEST(Pocs, ProjectTMembershipIdempotenceAndForm) {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 100; ++n) {
    const Elast4 a = random_elast4(rng);
    const Pair4 b = Pair4::symmetrized(testutil::random_raw(rng));
    const Pair4 r = project_T(a, b);
    EXPECT_TRUE(in_T(a, r, 1e-13));
    EXPECT_LT((project_T(a, r) - r).norm(), 1e-13);
    const Vec3 x = random_unit(rng), y = random_unit(rng);
    EXPECT_NEAR(biquadratic(r, x, y), biquadratic(a, x, y), 1e-12);
  }
}

TEST(Pocs, ProjectTIsNearestPoint) {
  // T_A = A + {antisymmetric-in-(i,j) weakly symmetric tensors}; compare
  // against random members of T_A.
  std::mt19937_64 rng(22);
  for (int n = 0; n < 20; ++n) {
    const Elast4 a = random_elast4(rng);
    const Pair4 b = Pair4::symmetrized(testutil::random_raw(rng));
    const double best = (project_T(a, b) - b).norm();
    for (int s = 0; s < 50; ++s) {
      const Pair4 member = project_T(a, Pair4::symmetrized(testutil::random_raw(rng)));
      EXPECT_LE(best, (member - b).norm() + 1e-12);
    }
  }
}

TEST(Pocs, ProjectSLandsInCone) {
  std::mt19937_64 rng(23);
  const Pair4 b = Pair4::symmetrized(testutil::random_raw(rng));
  const Pair4 p = project_S(b);
  EXPECT_GE(min_eigenvalue<9>(unfold(p)), -1e-12);
  EXPECT_LT((project_S(p) - p).norm(), 1e-12);
}

TEST(Pocs, OptionsValidation) {
  PocsOptions o;
  EXPECT_NO_THROW(o.validate());
  o.max_iter = 0;
  EXPECT_THROW(o.validate(), InvalidOptions);
  o = {};
  o.tol_converge = 0;
  EXPECT_THROW(o.validate(), InvalidOptions);
  o = {};
  o.epsilon_shift = -1;
  EXPECT_THROW(o.validate(), InvalidOptions);
  EXPECT_THROW(run_pocs(tensor_E(), o), InvalidOptions);
}

TEST(Pocs, SpdTensorConvergesImmediately) {
  std::mt19937_64 rng(24);
  for (int n = 0; n < 5; ++n) {
    const PocsReport r = run_pocs(random_spd_tensor(rng), {});
    EXPECT_EQ(r.verdict, PocsVerdict::IntersectionFound);
    EXPECT_LE(r.iterations, 2);
  }
}

TEST(Pocs, CounterexampleIsCertifiedMpsd) {
  const Certificate c = certify_mpsd(tensor_mpsd_not_spsd());
  EXPECT_EQ(c.kind, CertificateKind::CertifiedMPSD);
  EXPECT_LE(c.report.final_gap, 1e-10);
  EXPECT_LE(c.report.iterations, 20000);
  // The limit point is an S-PSD representative with the same form.
  std::mt19937_64 rng(25);
  const Vec3 x = random_unit(rng), y = random_unit(rng);
  EXPECT_NEAR(biquadratic(c.report.limit_A, x, y), biquadratic(tensor_mpsd_not_spsd(), x, y), 1e-8);
}

TEST(Pocs, ChoiLamGapStaysPositive) {
  const PocsReport r = run_pocs(tensor_choi_lam(1.0), {});
  EXPECT_EQ(r.verdict, PocsVerdict::GapPositive);
  EXPECT_GT(r.final_gap, 1e-3);
  EXPECT_EQ(certify_mpsd(tensor_choi_lam(1.0)).kind, CertificateKind::NotCertified);
}

TEST(Pocs, GapTraceIsFejerMonotone) {
  std::mt19937_64 rng(26);
  for (int n = 0; n < 20; ++n) {
    const PocsReport r = run_pocs(random_elast4(rng), {});
    for (std::size_t t = 1; t < r.gap_trace.size(); ++t)
      EXPECT_LE(r.gap_trace[t], r.gap_trace[t - 1] + 1e-12);
    EXPECT_EQ(static_cast<int>(r.gap_trace.size()), r.iterations);
  }
}

TEST(Pocs, ObserverSeesEveryIteration) {
  int calls = 0;
  const PocsReport r = run_pocs(tensor_mpsd_not_spsd(), {}, [&](int t, const Pair4&, const Pair4&) {
    EXPECT_EQ(t, calls + 1);
    ++calls;
  });
  EXPECT_EQ(calls, r.iterations);
}

TEST(Pocs, MaxIterBudgetGivesInconclusive) {
  PocsOptions o;
  o.max_iter = 3;
  const PocsReport r = run_pocs(tensor_mpsd_not_spsd(), o);
  EXPECT_EQ(r.verdict, PocsVerdict::Inconclusive);
  EXPECT_EQ(r.iterations, 3);
}

TEST(Pocs, CertifyMpdOnE) {
  PocsOptions o;
  o.epsilon_shift = 0.5;
  const Certificate c = certify_mpd(tensor_E(), o);
  EXPECT_EQ(c.kind, CertificateKind::CertifiedMPD);
  EXPECT_EQ(c.epsilon, 0.5);
}

TEST(Pocs, CertifyMpdRejectsNonPositiveEpsilon) {
  PocsOptions o;
  o.epsilon_shift = 0.0;
  EXPECT_THROW(certify_mpd(tensor_E(), o), InvalidEpsilon);
}

TEST(Pocs, CertifyMpdFailsOnBoundaryTensors) {
  PocsOptions o;
  o.epsilon_shift = kDefaultMpdEpsilon;
  // x3 = y3 = 0 and x1 y1 + x2 y2 = 0 make the counterexample vanish: M-PSD, not M-PD.
  EXPECT_EQ(certify_mpd(tensor_mpsd_not_spsd(), o).kind, CertificateKind::NotCertified);
}

TEST(Pocs, EpsilonSweepHalves) {
  PocsOptions o;
  o.epsilon_shift = 8.0;  // too large for E (min 1), fine after halving
  const Certificate c = certify_mpd(tensor_E(), o, true);
  EXPECT_EQ(c.kind, CertificateKind::CertifiedMPD);
  ASSERT_GE(c.tried_epsilons.size(), 2u);
  EXPECT_EQ(c.tried_epsilons[1], 4.0);
  EXPECT_LE(c.epsilon, 1.0);
}

TEST(Pocs, IsotropicCertification) {
  PocsOptions o;
  o.epsilon_shift = kDefaultMpdEpsilon;
  EXPECT_EQ(certify_mpd(tensor_isotropic(1, 1), o).kind, CertificateKind::CertifiedMPD);
  EXPECT_NE(certify_mpsd(tensor_isotropic(-3, 1)).kind, CertificateKind::CertifiedMPSD);
}

TEST(Pocs, Deterministic) {
  const PocsReport a = run_pocs(tensor_choi_lam(2.0), {});
  const PocsReport b = run_pocs(tensor_choi_lam(2.0), {});
  EXPECT_EQ(a.gap_trace, b.gap_trace);
  EXPECT_EQ(a.limit_A, b.limit_A);
}
