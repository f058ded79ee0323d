// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kpa/bases/basis.hpp"
#include "kpa/bases/derivation.hpp"
#include "kpa/canonical/bracket.hpp"
#include "kpa/canonical/tags.hpp"
#include "kpa/cli/commands.hpp"
#include "kpa/cli/config.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/expr/eval.hpp"
#include "kpa/expr/parser.hpp"
#include "kpa/expr/series.hpp"

namespace {

using namespace kpa;
using expr::Normal;
using json = nlohmann::json;

struct Proc {
  int code = -1;
  std::string out;
  double seconds = 0;
};

Proc kpa_run(const std::string& args) {
  const std::string cmd = std::string("KPA_COLOR=0 ") + KPA_BINARY + " " + args + " 2>/dev/null";
  Proc r;
  const auto start = std::chrono::steady_clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

json parse_report(const Proc& p) {
  json j = json::parse(p.out, nullptr, false);
  return j.is_discarded() ? json::object() : j;
}

std::string fixed(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

/// Collects failures of one criterion.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : ", ") + s; }
  [[nodiscard]] bool ok() const { return failure_.empty(); }
  [[nodiscard]] std::string detail() const { return ok() ? notes_ : failure_; }

 private:
  std::string failure_;
  std::string notes_;
};

using Pred = std::function<bool(const json&)>;

bool passes(const json& e) { return e.value("verdict", "") == "pass"; }
bool exact_pass(const json& e) { return passes(e) && e.value("mode", "") == "exact" && e.value("residual", "") == "0"; }

/// Every entry tagged with one of the keys satisfies the predicate, and each
/// key has at least one entry. `contains` narrows entries by relation text.
void require_tags(Check& c, const json& report, const std::vector<std::string>& keys, const Pred& pred,
                  const std::string& contains = "") {
  for (const auto& key : keys) {
    const std::string tag = canonical::tag(key);
    int seen = 0;
    for (const auto& e : report.value("entries", json::array())) {
      if (e.value("paper_tag", "") != tag) continue;
      if (!contains.empty() && e.value("relation", "").find(contains) == std::string::npos) continue;
      ++seen;
      c.require(pred(e), tag + " " + e.value("relation", "") + ": " + e.value("verdict", "") + " in " +
                             e.value("mode", "") + " mode");
    }
    c.require(seen > 0, "no entry for " + tag + (contains.empty() ? "" : " (" + contains + ")"));
  }
}

/// Entries found by relation text, for checks that carry no tag.
void require_relation(Check& c, const json& report, const std::string& contains, const Pred& pred) {
  int seen = 0;
  for (const auto& e : report.value("entries", json::array())) {
    if (e.value("relation", "").find(contains) == std::string::npos) continue;
    ++seen;
    c.require(pred(e), e.value("relation", "") + ": " + e.value("verdict", ""));
  }
  c.require(seen > 0, "no entry matching '" + contains + "'");
}

Normal H(const char* text) {
  expr::SymbolTable t = expr::SymbolTable::standard();
  for (const char* s : {"P0", "Psq", "X0bar", "Xsqbar"}) t.add_symbol(s);
  return expr::to_normal(expr::parse(text, t));
}

struct Runs {
  Proc dsr1;
  Proc dual;
  json dsr1_report;
  json dual_report;
};

Check sr_control() {
  Check c;
  const Proc p = kpa_run("verify --basis sr --suite all --format json");
  const json r = parse_report(p);
  c.require(p.code == 0, "exit code " + std::to_string(p.code));
  require_tags(c, r,
               {"lorentz.rr", "lorentz.rb", "lorentz.bb", "sr.rot.energy", "sr.rot.momentum", "sr.boost.energy",
                "sr.boost.momentum", "sr.phase.xp", "sr.phase.commute", "sr.rot.time", "sr.rot.space",
                "sr.boost.time", "sr.boost.space"},
               exact_pass);
  c.require(p.seconds < 5, "took " + fixed(p.seconds));
  c.note(fixed(p.seconds));
  return c;
}

Check phase_space(const std::string& basis, const std::vector<std::string>& keys) {
  Check c;
  const Proc p = kpa_run("verify --basis " + basis + " --suite phase-space --samples 100 --tolerance 1e-9 --format json");
  const json r = parse_report(p);
  c.require(p.code == 0, "exit code " + std::to_string(p.code));
  require_tags(c, r, keys, [](const json& e) {
    const json& ev = e["evidence"];
    return exact_pass(e) && !e.value("on_shell", true) && ev.is_object() && ev.value("points", 0) >= 100 &&
           ev.value("pass", false);
  });
  c.require(p.seconds < 10, "took " + fixed(p.seconds));
  c.note(fixed(p.seconds));
  return c;
}

Check derivations() {
  Check c;
  const auto dual_df = bases::dual_functions();
  c.require(bases::compare_triples(dual_df, bases::dual_triple(), expr::EqualityMode::Exact).pass(),
            "dual triple is not reproduced exactly");
  const auto dsr1_df = bases::dsr1_functions();
  c.require(!bases::compare_triples(dsr1_df, bases::dsr1_triple(), expr::EqualityMode::Exact).pass(),
            "dsr1 triple unexpectedly exact");
  c.require(bases::compare_triples(dsr1_df, bases::dsr1_triple(), expr::EqualityMode::Shell).pass(),
            "dsr1 triple not reproduced modulo shell");
  c.require(bases::constraint_value(bases::dsr1_triple()) == Normal(1), "dsr1 constraint is not 1");
  c.require(bases::constraint_value(bases::dual_triple()) == Normal(1), "dual constraint is not 1");
  return c;
}

Check actions(const Runs& runs) {
  Check c;
  require_tags(c, runs.dsr1_report, {"dsr1.boost.time", "dsr1.boost.space"}, exact_pass, "table engine");
  require_tags(c, runs.dsr1_report, {"dsr1.rot.time", "dsr1.rot.space"}, exact_pass);
  require_tags(c, runs.dual_report,
               {"dual.rot.time", "dual.rot.space", "dual.boost.time", "dual.boost.space", "dual.rot.energy",
                "dual.rot.momentum", "dual.boost.energy", "dual.boost.momentum"},
               exact_pass);
  // Hand check: {n_i, Pbar_0} = p_i W with W = sqrt(1 + kappabar^2 (x0^2 - xsq)).
  const auto sr = bases::builtin_basis("sr");
  const auto dual = bases::builtin_basis("dual");
  const Normal W = expr::to_normal(expr::parse("sqrt(1 + kappabar^2*(x0^2 - xsq))"));
  for (int i = 1; i <= 3; ++i) {
    const Normal lhs = canonical::poisson(sr.get(bases::Role::Boost, i).realization,
                                          dual.get(bases::Role::Momentum, 0).realization);
    c.require(lhs == Normal::symbol("p" + std::to_string(i)) * W, "{n_i, P0bar} = " + lhs.str());
  }
  return c;
}

Check jacobi(const Runs& runs) {
  Check c;
  require_tags(c, runs.dsr1_report, {"dsr1.triple"}, exact_pass, "table engine");
  require_relation(c, runs.dual_report, "realized generators (poisson engine)", exact_pass);
  const std::string mutant = std::string(KPA_TEST_DATA) + "/mutant.kpa";
  const Proc p = kpa_run("verify --basis " + mutant + " --suite jacobi,constraint --format json");
  const json r = parse_report(p);
  c.require(p.code == 1, "mutant exit code " + std::to_string(p.code));
  const auto fails = [](const json& e) { return e.value("verdict", "") == "fail"; };
  require_tags(c, r, {"dsr1.constraint"}, fails);
  require_tags(c, r, {"dsr1.triple"}, fails, "table engine");
  // Consistency: the Jacobiator on (N1, N2, P1) is -P2 times the constraint residual.
  const cli::BasisConfig cfg = cli::resolve_basis(mutant);
  const auto alg = cli::claimed_algebra(cfg.basis, {"N1", "N2", "N3", "M1", "M2", "M3", "P0", "P1", "P2", "P3"});
  const Normal j = canonical::jacobiator(canonical::table_engine(alg), Normal::symbol("N1"), Normal::symbol("N2"),
                                         Normal::symbol("P1"));
  const Normal residual = bases::constraint_value(bases::effective_triple(cfg.basis)) - 1;
  c.require(!residual.is_zero(), "mutant constraint residual vanishes");
  c.require(j == -Normal::symbol("P2") * bases::in_generators(cfg.basis, residual),
            "jacobiator " + j.str() + " does not track the residual");
  return c;
}

Check limits(const Runs& runs) {
  Check c;
  require_relation(c, runs.dsr1_report, "as kappa -> infinity", passes);
  require_relation(c, runs.dual_report, "as kappabar -> 0", passes);
  const auto k = bases::dsr1_triple();
  const auto ks = expr::series(k.A, "kappa", std::nullopt, 1);
  c.require(ks.coefficient(0) == H("P0"), "A does not tend to P0");
  c.require(expr::series(k.B, "kappa", std::nullopt, 0).coefficient(0).is_zero(), "B does not vanish");
  c.require(expr::series(k.D, "kappa", std::nullopt, 0).coefficient(0) == Normal(1), "D does not tend to 1");
  c.require(ks.coefficient(1) == H("Psq/2 - P0^2"), "order-1 coefficient " + ks.coefficient(1).str());
  const auto d = bases::dual_triple();
  c.require(expr::series(d.A, "kappabar", expr::Rational(0), 0).coefficient(0) == H("X0bar"),
            "Abar does not tend to X0bar");
  c.require(expr::series(d.B, "kappabar", expr::Rational(0), 0).coefficient(0).is_zero(), "Bbar does not vanish");
  c.require(expr::series(d.D, "kappabar", expr::Rational(0), 0).coefficient(0) == Normal(1),
            "Dbar does not tend to 1");
  // Numeric Taylor oracle for the order-1 coefficient.
  auto rng = expr::tagged_rng(7, "acceptance-taylor");
  for (int i = 0; i < 50; ++i) {
    const long double p0 = expr::uniform(rng, -2, 2);
    const long double pp = expr::uniform(rng, 0, 3);
    const long double kappa = 1e5L;
    const long double a = kappa / 2 * (1 - std::exp(-2 * p0 / kappa)) + pp / (2 * kappa);
    c.require(std::fabs(static_cast<double>(kappa * (a - p0) - (pp / 2 - p0 * p0))) < 1e-3,
              "numeric Taylor oracle disagrees");
  }
  return c;
}

Check coalgebra(const Runs& runs) {
  Check c;
  require_tags(c, runs.dsr1_report, {"dsr1.coproduct.space", "dsr1.coproduct.momentum"}, exact_pass, "coassociative");
  require_tags(c, runs.dual_report, {"dual.coproduct.momentum", "dual.coproduct.space"}, exact_pass, "coassociative");
  require_relation(c, runs.dsr1_report, "negative control", passes);
  require_relation(c, runs.dual_report, "negative control", passes);
  require_tags(c, runs.dsr1_report, {"dsr1.phase.x0p0", "dsr1.phase.xipj", "dsr1.phase.commute", "dsr1.phase.x0pi"},
               exact_pass, "Heisenberg double");
  require_tags(c, runs.dual_report, {"dual.phase.p0x0", "dual.phase.pixj", "dual.phase.commute", "dual.phase.p0xi"},
               exact_pass, "Heisenberg double");
  require_tags(c, runs.dsr1_report, {"dsr1.phase.x0xi"}, exact_pass, "dual of the cobracket");
  require_tags(c, runs.dual_report, {"dual.phase.p0pi"}, exact_pass, "dual of the cobracket");
  require_relation(c, runs.dsr1_report, "agrees with the poisson engine", exact_pass);
  require_relation(c, runs.dual_report, "agrees with the poisson engine", exact_pass);
  return c;
}

Check onshell(const Runs& runs) {
  Check c;
  const auto shell_pass = [](const json& e) { return passes(e) && e.value("on_shell", false); };
  require_tags(c, runs.dsr1_report, {"dsr1.boosts", "dsr1.functions"}, shell_pass);
  const Proc p = kpa_run("verify --basis dsr1 --suite inverses,onshell --mode exact --format json");
  const json r = parse_report(p);
  c.require(p.code == 1, "exact-mode exit code " + std::to_string(p.code));
  require_tags(c, r, {"dsr1.boosts", "dsr1.functions"}, [](const json& e) {
    const json& ev = e["evidence"];
    return e.value("verdict", "") == "fail" && e.value("residual", "0") != "0" && ev.is_object() &&
           ev.contains("worst_point") && !ev["worst_point"].empty();
  });
  const Proc text = kpa_run("verify --basis dsr1 --suite onshell --mode exact");
  c.require(text.out.find(" at x0=") != std::string::npos, "no printed counterexample");
  require_tags(c, runs.dual_report, {"dual.functions", "dual.momenta.inverse", "dual.rotations"},
               [](const json& e) { return exact_pass(e) && !e.value("on_shell", true); });
  return c;
}

Check engineering(const Runs& runs) {
  Check c;
  const double total = runs.dsr1.seconds + runs.dual.seconds;
  c.require(total < 60, "deformed bases took " + fixed(total));
  c.require(runs.dsr1.code == 0 && runs.dual.code == 0, "deformed bases do not pass");
  c.require(kpa_run("verify --basis dsr1 --format json").out == runs.dsr1.out, "dsr1 report differs between runs");
  c.require(kpa_run("verify --basis dual --format json").out == runs.dual.out, "dual report differs between runs");
  c.require(kpa_run("verify --basis sr").code == 0, "sr exit code");
  c.require(kpa_run("verify --basis " + std::string(KPA_TEST_DATA) + "/mutant.kpa --suite constraint").code == 1,
            "mutant exit code");
  c.require(kpa_run("verify --no-such-flag").code == 2, "bad flag exit code");
  c.require(kpa_run("verify --basis no-such-basis").code == 2, "unknown basis exit code");
  c.require(kpa_run("bracket 'x1 +' x0").code == 2, "parse error exit code");
  c.note("both deformed bases " + fixed(total));
  return c;
}

}  // namespace

int main() {
  Runs runs;
  runs.dsr1 = kpa_run("verify --basis dsr1 --format json");
  runs.dual = kpa_run("verify --basis dual --format json");
  runs.dsr1_report = parse_report(runs.dsr1);
  runs.dual_report = parse_report(runs.dual);

  struct Row {
    int number;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Row> rows{
      {1, "SR control", sr_control},
      {2, "DSR1 phase space",
       [] {
         return phase_space("dsr1", {"dsr1.phase.x0p0", "dsr1.phase.xipj", "dsr1.phase.commute", "dsr1.phase.x0pi",
                                     "dsr1.phase.x0xi"});
       }},
      {3, "dual phase space",
       [] {
         return phase_space("dual", {"dual.phase.p0x0", "dual.phase.pixj", "dual.phase.commute", "dual.phase.p0xi",
                                     "dual.phase.p0pi"});
       }},
      {4, "derivations", derivations},
      {5, "boost and rotation actions", [&] { return actions(runs); }},
      {6, "Jacobi and mutant", [&] { return jacobi(runs); }},
      {7, "limits", [&] { return limits(runs); }},
      {8, "co-algebra", [&] { return coalgebra(runs); }},
      {9, "on-shell ledger", [&] { return onshell(runs); }},
      {10, "engineering", [&] { return engineering(runs); }},
  };
  int failed = 0;
  for (const auto& row : rows) {
    Check c;
    try {
      c = row.run();
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    if (!c.ok()) ++failed;
    std::cout << "criterion " << row.number << ": " << (c.ok() ? "PASS" : "FAIL") << "  " << row.name;
    if (!c.detail().empty()) std::cout << " (" << c.detail() << ")";
    std::cout << "\n";
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria fail") << "\n";
  return failed == 0 ? 0 : 1;
}
