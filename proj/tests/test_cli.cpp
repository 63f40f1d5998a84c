#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "ellipticity/io.hpp"
#include "ellipticity/tensor.hpp"

using namespace ellipticity;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(ELLIPTICITY_LAB_EXE) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string tmp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ellipticity_cli_" + name)).string();
}

const std::string kDecomp = std::string(ELLIPTICITY_DATA_DIR) + "/choi_lam_gamma1.decomp.json";

}  // namespace

TEST(Cli, GenE) {
  const std::string f = tmp("e.json");
  ASSERT_EQ(run("gen E -o " + f).code, 0);
  const Elast4 a = elast4_from_json(read_json_file(f));
  EXPECT_EQ(a, tensor_E());
}

TEST(Cli, GenChoiLamAndIsotropic) {
  const std::string f = tmp("cl.json");
  ASSERT_EQ(run("gen choi-lam --gamma 1 -o " + f).code, 0);
  EXPECT_EQ(elast4_from_json(read_json_file(f)), tensor_choi_lam(1.0));
  const CliRun iso = run("gen isotropic --lambda 1 --mu 1");
  ASSERT_EQ(iso.code, 0);
  EXPECT_EQ(elast4_from_json(json::parse(iso.out)), tensor_isotropic(1, 1));
}

TEST(Cli, GenErrors) {
  EXPECT_EQ(run("gen nonsense").code, 1);
  EXPECT_EQ(run("gen isotropic --lambda 1").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST(Cli, CheckExitCodesAndProvenance) {
  const std::string cx = tmp("cx.json"), cl = tmp("cl2.json"), iso = tmp("iso.json");
  ASSERT_EQ(run("gen counterexample-s2 -o " + cx).code, 0);
  ASSERT_EQ(run("gen choi-lam -o " + cl).code, 0);
  ASSERT_EQ(run("gen isotropic --lambda -3 --mu 1 -o " + iso).code, 0);

  CliRun r = run("check --json -i " + cx);
  EXPECT_EQ(r.code, 0);
  json doc = json::parse(r.out);
  EXPECT_EQ(doc["overall"], "MPSD");
  EXPECT_EQ(doc["provenance"], "POCS");

  r = run("check --json -i " + cl + " --decomp " + kDecomp);
  EXPECT_EQ(r.code, 0);
  doc = json::parse(r.out);
  EXPECT_EQ(doc["overall"], "MPSD");
  EXPECT_EQ(doc["provenance"], "Case-2 theorem");

  EXPECT_EQ(run("check -i " + cl).code, 2);

  r = run("check --json -i " + iso);
  EXPECT_EQ(r.code, 0);
  doc = json::parse(r.out);
  EXPECT_EQ(doc["overall"], "NotMPSD");
  EXPECT_TRUE(doc["stages"][3]["details"].contains("witness"));
}

TEST(Cli, InputErrorsExitOne) {
  const std::string bad = tmp("bad.json");
  {
    FILE* f = std::fopen(bad.c_str(), "w");
    std::fputs("{\"format\": \"elast4-v1\", \"entries\": [{\"i\":1,\"j\":2,\"k\":1,\"l\":1,\"v\":1}]}", f);
    std::fclose(f);
  }
  EXPECT_EQ(run("check -i " + bad).code, 1);  // SymmetryViolation
  {
    FILE* f = std::fopen(bad.c_str(), "w");
    std::fputs("{not json", f);
    std::fclose(f);
  }
  EXPECT_EQ(run("oracle -i " + bad).code, 1);  // ParseError
  EXPECT_EQ(run("oracle -i /nonexistent/file.json").code, 1);
}

TEST(Cli, StageCommands) {
  const std::string rs = tmp("rs.json"), cl = tmp("cl3.json"), e = tmp("e2.json");
  ASSERT_EQ(run("gen random-spd --seed 7 -o " + rs).code, 0);
  ASSERT_EQ(run("gen choi-lam --gamma 1 -o " + cl).code, 0);
  ASSERT_EQ(run("gen E -o " + e).code, 0);

  json doc = json::parse(run("pocs --json -i " + rs).out);
  EXPECT_EQ(doc["verdict"], "IntersectionFound");
  EXPECT_LE(doc["iterations"].get<int>(), 2);

  const CliRun c = run("case --json --case 2 -i " + cl + " --decomp " + kDecomp);
  EXPECT_EQ(c.code, 0);
  doc = json::parse(c.out);
  EXPECT_EQ(doc["verdict"], "MPSD");
  EXPECT_NEAR(doc["eta_sup"].get<double>(), 1.0, 1e-6);

  EXPECT_EQ(run("case --case 3 -i " + cl + " --decomp " + kDecomp).code, 1);  // NotCase3

  doc = json::parse(run("oracle --json -i " + e).out);
  EXPECT_NEAR(doc["min_value"].get<double>(), 1.0, 1e-12);
}

TEST(Cli, OutputIsByteIdentical) {
  const std::string cl = tmp("cl4.json"), o1 = tmp("r1.json"), o2 = tmp("r2.json");
  ASSERT_EQ(run("gen choi-lam -o " + cl).code, 0);
  const CliRun a = run("check --json -i " + cl + " --decomp " + kDecomp + " -o " + o1);
  const CliRun b = run("check --json -i " + cl + " --decomp " + kDecomp + " -o " + o2);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(read_json_file(o1).dump(), read_json_file(o2).dump());
  // Thread count must not change the report.
  const CliRun c = run("check --json -i " + cl + " --decomp " + kDecomp);
  const std::string one = std::string("ELLIPTICITY_LAB_THREADS=1 ") + ELLIPTICITY_LAB_EXE + " check --json -i " + cl +
                          " --decomp " + kDecomp;
  FILE* p = popen(one.c_str(), "r");
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  pclose(p);
  EXPECT_EQ(out, c.out);
}
