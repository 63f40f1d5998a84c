#include <gtest/gtest.h>

#include "ellipticity/check.hpp"
#include "ellipticity/generators.hpp"

using namespace ellipticity;

namespace {

const StageResult& stage(const CheckReport& r, const std::string& name) {
  for (const auto& s : r.stages)
    if (s.stage == name) return s;
  throw std::runtime_error("missing stage " + name);
}

CheckConfig with_choi_lam_decomp() {
  CheckConfig cfg;
  cfg.decomp = decomp_from_json(read_json_file(std::string(ELLIPTICITY_DATA_DIR) + "/choi_lam_gamma1.decomp.json"));
  return cfg;
}

}  // namespace

TEST(Check, StagesRunInOrder) {
  const CheckReport r = run_check(tensor_E());
  ASSERT_EQ(r.stages.size(), 4u);
  EXPECT_EQ(r.stages[0].stage, "s-psd");
  EXPECT_EQ(r.stages[1].stage, "pocs");
  EXPECT_EQ(r.stages[2].stage, "case");
  EXPECT_EQ(r.stages[3].stage, "oracle");
  EXPECT_EQ(r.overall, Overall::MPD);
  EXPECT_EQ(r.provenance, "S-PSD test");
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(Check, CounterexampleDecidedByPocs) {
  const CheckReport r = run_check(tensor_mpsd_not_spsd());
  EXPECT_EQ(stage(r, "s-psd").verdict, "not S-PSD");
  EXPECT_EQ(stage(r, "pocs").verdict, "CertifiedMPSD");
  EXPECT_EQ(r.overall, Overall::MPSD);
  EXPECT_EQ(r.provenance, "POCS");
}

TEST(Check, ChoiLamDecidedByCase2) {
  const CheckReport r = run_check(tensor_choi_lam(1.0), with_choi_lam_decomp());
  EXPECT_EQ(r.overall, Overall::MPSD);
  EXPECT_EQ(r.provenance, "Case-2 theorem");
  EXPECT_EQ(stage(r, "pocs").details["mpsd"]["pocs"]["verdict"], "GapPositive");
  EXPECT_TRUE(r.tripwire.empty());
}

TEST(Check, ChoiLamWithoutDecompositionIsUnknown) {
  const CheckReport r = run_check(tensor_choi_lam(1.0));
  EXPECT_EQ(r.overall, Overall::Unknown);
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_NE(stage(r, "case").details["decomposition"].get<std::string>().find("heuristic"), std::string::npos);
}

TEST(Check, IsotropicNegativeHasWitness) {
  const CheckReport r = run_check(tensor_isotropic(-3, 1));
  EXPECT_EQ(r.overall, Overall::NotMPSD);
  EXPECT_EQ(r.provenance, "oracle");
  const StageResult& o = stage(r, "oracle");
  EXPECT_TRUE(o.refutes);
  EXPECT_TRUE(o.details.contains("witness"));
}

TEST(Check, MismatchedDecompositionIsIgnored) {
  CheckConfig cfg = with_choi_lam_decomp();
  const CheckReport r = run_check(tensor_choi_lam(2.0), cfg);
  EXPECT_EQ(stage(r, "case").verdict, "decomposition does not reproduce the tensor");
  EXPECT_FALSE(stage(r, "case").certifies_mpsd);
}

TEST(Check, TripwireOnContradiction) {
  StageResult pocs{"pocs", "CertifiedMPSD", false, true, false, {}};
  StageResult oracle{"oracle", "NotMPSD", false, false, true, {}};
  const CheckReport r = aggregate({pocs, oracle});
  EXPECT_EQ(r.overall, Overall::Unknown);
  EXPECT_EQ(r.exit_code(), 2);
  EXPECT_NE(r.tripwire.find("tripwire"), std::string::npos);
  EXPECT_TRUE(to_json(r).contains("tripwire"));

  oracle.refutes = false;
  oracle.verdict = "MPSD_boundary";
  const CheckReport ok = aggregate({pocs, oracle});
  EXPECT_EQ(ok.overall, Overall::MPSD);
  EXPECT_TRUE(ok.tripwire.empty());
}

TEST(Check, CaseRefutationWithoutOracleWitness) {
  StageResult c{"case", "Case 1: NotMPSD", false, false, true, {{"case", 1}}};
  StageResult oracle{"oracle", "MPSD_boundary", false, false, false, {}};
  const CheckReport r = aggregate({c, oracle});
  EXPECT_EQ(r.overall, Overall::NotMPSD);
  EXPECT_EQ(r.provenance, "Case-1 theorem");
}

TEST(Check, ReportIsDeterministic) {
  const CheckConfig cfg = with_choi_lam_decomp();
  EXPECT_EQ(to_json(run_check(tensor_choi_lam(1.0), cfg)).dump(), to_json(run_check(tensor_choi_lam(1.0), cfg)).dump());
}

TEST(Check, NotMpsdNeverWithoutEvidence) {
  std::mt19937_64 rng(61);
  for (int n = 0; n < 10; ++n) {
    CheckConfig cfg;
    cfg.grid_n = 300;
    const CheckReport r = run_check(random_elast4(rng), cfg);
    if (r.overall == Overall::NotMPSD) {
      bool evidence = false;
      for (const auto& s : r.stages) evidence = evidence || s.refutes;
      EXPECT_TRUE(evidence);
    }
  }
}
