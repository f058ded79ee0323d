#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "kpa/canonical/tags.hpp"
#include "kpa/cli/commands.hpp"
#include "kpa/cli/config.hpp"
#include "kpa/cli/output.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/expr/errors.hpp"

namespace {

using namespace kpa;

struct Proc {
  int code = -1;
  std::string out;
};

// Runs the kpa binary through the shell; stderr is folded into stdout.
Proc kpa_run(const std::string& args, const std::string& env = "KPA_COLOR=0") {
  const std::string cmd = env + " " + KPA_BINARY + " " + args + " 2>&1";
  Proc r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* file) { return std::string(KPA_TEST_DATA) + "/" + file; }

// Line number reported for a config that is expected to be rejected.
std::string config_error(const std::string& text) {
  try {
    cli::parse_config(text, "t.kpa");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, ParsesBasesAndCoalgebras) {
  const auto cfg = cli::load_config(data("twist.kpa"));
  ASSERT_EQ(cfg.bases.size(), 1u);
  EXPECT_EQ(cfg.bases[0].basis.name, "k");
  ASSERT_EQ(cfg.coalgebras.size(), 2u);
  EXPECT_EQ(cfg.coalgebras[0].generators.size(), 4u);
  const auto two = cli::load_config(data("explicit.kpa"));
  ASSERT_EQ(two.bases.size(), 2u);
  EXPECT_EQ(two.bases[1].basis.name, "flat");
}

TEST(Config, ErrorsCarryLineNumbers) {
  const std::string head = "[basis \"b\"]\nkind = momentum\n";
  const std::string fg = "f = p0\ng = 1\nF = P0\nG = 1\n";
  EXPECT_NE(config_error(head + fg + "colour = red\n").find("t.kpa:7:"), std::string::npos);
  EXPECT_NE(config_error(head + "f = p0\nf = p0\n").find("t.kpa:4:"), std::string::npos);
  EXPECT_NE(config_error("[basis \"b\"]\nf = p0\ng = 1\nF = P0\nG = 1\n").find("kind"), std::string::npos);
  EXPECT_NE(config_error("[basis \"b\"]\nkind = sideways\n").find("t.kpa:2:"), std::string::npos);
  EXPECT_FALSE(config_error("[basis \"b\"]\nbase = dsr1\nf = p0\n").empty());
  EXPECT_NE(config_error("[basis]\n").find("t.kpa:1:"), std::string::npos);
  EXPECT_NE(config_error("kind = momentum\n").find("t.kpa:1:"), std::string::npos);
  EXPECT_NE(config_error(head + "f = p0 +\n").find("t.kpa:3:"), std::string::npos);
  EXPECT_FALSE(config_error("[coalgebra \"c\"]\nsector = momenta\ngenerators = P0, P1\n"
                            "partners = X0, X1\n")
                   .empty());
  EXPECT_TRUE(config_error(head + fg).empty());
}

TEST(Config, SuiteLists) {
  EXPECT_EQ(cli::parse_suite_list("all"), cli::suite_names());
  EXPECT_TRUE(cli::parse_suite_list("").empty());
  const auto two = cli::parse_suite_list("jacobi,lorentz");
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], "jacobi");
  EXPECT_THROW(cli::parse_suite_list("lorentz,nope"), ConfigError);
}

TEST(Config, ResolvesNamedBasisInFile) {
  EXPECT_EQ(cli::resolve_basis(data("explicit.kpa") + "#flat").basis.name, "flat");
  EXPECT_EQ(cli::resolve_basis(data("explicit.kpa")).basis.name, "dual-explicit");
  EXPECT_THROW(cli::resolve_basis(data("explicit.kpa") + "#missing"), ConfigError);
  EXPECT_EQ(cli::resolve_basis("dual").basis.name, "dual");
}

TEST(Suites, SrPassesAndEmptyListIsEmpty) {
  cli::SuiteConfig opts;
  opts.samples = 20;
  const auto cfg = cli::resolve_basis("sr");
  const auto report = cli::run_suites(cfg, opts);
  EXPECT_FALSE(report.entries.empty());
  EXPECT_TRUE(report.all_pass());
  EXPECT_EQ(cli::exit_code(report), 0);
  opts.suites.clear();
  EXPECT_TRUE(cli::run_suites(cfg, opts).entries.empty());
}

TEST(Suites, JobsDoNotChangeTheReport) {
  cli::SuiteConfig opts;
  opts.samples = 20;
  opts.suites = {"lorentz", "rotation-action", "phase-space", "jacobi"};
  const auto cfg = cli::resolve_basis("dual");
  cli::RunInfo info{"dual", opts, std::nullopt};
  const auto one = cli::render_json(cli::run_suites(cfg, opts), info).dump();
  opts.jobs = 3;
  info.opts = opts;
  EXPECT_EQ(cli::render_json(cli::run_suites(cfg, opts), info).dump(), one);
}

TEST(Suites, DualPhaseSpaceCarriesTags) {
  cli::SuiteConfig opts;
  opts.samples = 20;
  opts.suites = {"phase-space"};
  const auto report = cli::run_suites(cli::resolve_basis("dual"), opts);
  ASSERT_FALSE(report.entries.empty());
  EXPECT_TRUE(report.all_pass());
  bool tagged = false;
  for (const auto& e : report.entries) tagged = tagged || e.tag == canonical::tag("dual.phase.p0pi");
  EXPECT_TRUE(tagged);
}

TEST(Suites, ConfigBasesVerify) {
  cli::SuiteConfig opts;
  opts.samples = 20;
  for (const char* sel : {"explicit.kpa#dual-explicit", "explicit.kpa#flat", "twist.kpa#k"}) {
    const auto report = cli::run_suites(cli::resolve_basis(data(sel)), opts);
    EXPECT_TRUE(report.all_pass()) << sel;
  }
}

TEST(Binary, ExitCodes) {
  EXPECT_EQ(kpa_run("verify --basis sr").code, 0);
  EXPECT_EQ(kpa_run("verify --basis " + data("mutant.kpa") + " --suite constraint").code, 1);
  EXPECT_EQ(kpa_run("verify --bogus").code, 2);
  EXPECT_EQ(kpa_run("verify --basis nope").code, 2);
  EXPECT_EQ(kpa_run("verify --suite nope").code, 2);
  EXPECT_EQ(kpa_run("bracket 'x1 +' x0").code, 2);
  EXPECT_EQ(kpa_run("bracket foo x0").code, 2);
  EXPECT_EQ(kpa_run("tags").code, 0);
}

TEST(Binary, OutputIsByteIdentical) {
  const Proc a = kpa_run("verify --basis dual --suite phase-space,jacobi --format json");
  const Proc b = kpa_run("verify --basis dual --suite phase-space,jacobi --format json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(kpa_run("verify --basis sr").out, kpa_run("verify --basis sr").out);
}

TEST(Binary, ColorFollowsEnvironment) {
  EXPECT_EQ(kpa_run("verify --basis sr --suite lorentz", "KPA_COLOR=0").out.find("\x1b["), std::string::npos);
  EXPECT_NE(kpa_run("verify --basis sr --suite lorentz", "KPA_COLOR=1").out.find("\x1b["), std::string::npos);
}

TEST(Binary, JsonShape) {
  const Proc r = kpa_run("verify --basis sr --suite lorentz --format json");
  for (const char* key : {"\"basis\"", "\"seed\"", "\"entries\"", "\"paper_tag\"", "\"verdict\"", "\"residual\"",
                          "\"evidence\"", "\"summary\""})
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  const Proc m = kpa_run("verify --basis " + data("mutant.kpa") + " --suite constraint --format json");
  EXPECT_EQ(m.code, 1);
  EXPECT_NE(m.out.find("\"fail\""), std::string::npos);
  EXPECT_NE(m.out.find("\"worst_point\""), std::string::npos);
}

TEST(Binary, Brackets) {
  const Proc sr = kpa_run("bracket n1 x0 --basis sr");
  EXPECT_EQ(sr.code, 0);
  EXPECT_NE(sr.out.find("{n1, x0} = x1"), std::string::npos) << sr.out;
  EXPECT_NE(sr.out.find("commutator"), std::string::npos);
  const Proc dsr = kpa_run("bracket N2 X3 --basis dsr1");
  EXPECT_NE(dsr.out.find("= -M1/kappa"), std::string::npos) << dsr.out;
  const Proc dual = kpa_run("bracket n1 P0bar --basis dual");
  EXPECT_NE(dual.out.find("P1bar + kappabar*n1"), std::string::npos) << dual.out;
}

TEST(Binary, Derive) {
  const Proc sr = kpa_run("derive --basis sr");
  EXPECT_NE(sr.out.find("A = P0"), std::string::npos);
  EXPECT_NE(sr.out.find("B = 0"), std::string::npos);
  EXPECT_NE(sr.out.find("D = 1"), std::string::npos);
  EXPECT_NE(kpa_run("derive --basis dual").out.find("constraint: 1"), std::string::npos);
  EXPECT_NE(kpa_run("derive --basis dsr1").out.find("equality modulo mass shell"), std::string::npos);
}

}  // namespace
