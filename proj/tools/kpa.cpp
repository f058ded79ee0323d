#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kpa/canonical/tags.hpp"
#include "kpa/cli/commands.hpp"
#include "kpa/cli/output.hpp"
#include "kpa/cli/suites.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/expr.hpp"

namespace {

using namespace kpa;

expr::Normal parse_input(const std::string& text, const expr::SymbolTable& table) {
  return expr::to_normal(expr::parse(text, table));
}

int run_verify(const cli::SuiteConfig& opts, const std::string& suites, const std::string& mode) {
  cli::SuiteConfig o = opts;
  o.suites = cli::parse_suite_list(suites);
  if (mode == "exact") o.mode = expr::EqualityMode::Exact;
  if (mode == "shell") o.mode = expr::EqualityMode::Shell;
  if (mode == "numeric") o.mode = expr::EqualityMode::Numeric;
  const cli::BasisConfig cfg = cli::resolve_basis(o.basis);
  const auto start = std::chrono::steady_clock::now();
  const canonical::Report report = cli::run_suites(cfg, o);
  cli::RunInfo info{cfg.basis.name, o, std::nullopt};
  if (o.timing)
    info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (o.format == "json") {
    std::cout << cli::render_json(report, info).dump(2) << "\n";
  } else {
    std::cout << cli::render_text(report, info, cli::color_enabled());
  }
  if (report.tripwire()) std::cerr << "kpa: tripwire: symbolic pass contradicted by numeric evidence\n";
  return cli::exit_code(report);
}

int run_bracket(const std::string& basis, const std::string& a, const std::string& b, const std::string& engine,
                const std::string& format) {
  const cli::BasisConfig cfg = cli::resolve_basis(basis);
  const expr::SymbolTable table = cli::bracket_symbols(cfg.basis);
  const expr::Normal na = parse_input(a, table);
  const expr::Normal nb = parse_input(b, table);
  cli::BracketOutcome out;
  if (engine == "table") {
    out.generators = canonical::table_bracket(cli::claimed_algebra(cfg.basis), na, nb);
    out.method = "table";
  } else {
    std::vector<std::string> preferred = cli::generators_in_text(cfg.basis, a);
    for (const auto& g : cli::generators_in_text(cfg.basis, b)) preferred.push_back(g);
    out = cli::compute_bracket(cfg, na, nb, preferred);
  }
  const std::string result = out.generators ? out.generators->str() : out.phase_space.str();
  const char* note = "Poisson bracket; the commutator [a, b] is i times this value";
  if (format == "json") {
    nlohmann::ordered_json j;
    j["basis"] = cfg.basis.name;
    j["a"] = a;
    j["b"] = b;
    j["engine"] = engine;
    j["result"] = result;
    j["in_generators"] = out.generators.has_value();
    if (engine != "table") j["phase_space"] = out.phase_space.str();
    j["method"] = out.method;
    j["on_shell"] = out.on_shell;
    j["i_stripped"] = canonical::RelationTable::kIStripped;
    j["note"] = note;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "{" << a << ", " << b << "} = " << result << "\n";
  if (!out.generators) std::cout << "  (in SR phase-space variables; no generator form found)\n";
  if (out.method == "table" && engine != "table") std::cout << "  (claimed relation table, confirmed by the poisson engine)\n";
  if (out.on_shell) std::cout << "  [on-shell]\n";
  std::cout << "note: " << note << "\n";
  return 0;
}

int run_derive(const std::string& basis, const std::string& what, const std::string& format) {
  const cli::BasisConfig cfg = cli::resolve_basis(basis);
  const bases::Basis& b = cfg.basis;
  if (what == "abd") {
    const cli::DerivedTriple d = cli::derive_triple(cfg);
    std::string tag = "-";
    if (b.family == "dsr1" && d.status != "derived") tag = canonical::tag("dsr1.triple");
    if (b.family == "dual" && d.status != "derived") tag = canonical::tag("dual.triple");
    std::string status = "derived from the defining functions";
    if (d.status == "exact") status = "matches the basis triple exactly";
    if (d.status == "shell") status = "equality modulo mass shell";
    if (format == "json") {
      nlohmann::ordered_json j;
      j["basis"] = b.name;
      j["paper_tag"] = tag;
      j["A"] = d.triple.A.str();
      j["B"] = d.triple.B.str();
      j["D"] = d.triple.D.str();
      j["status"] = status;
      j["constraint"] = d.constraint.str();
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    std::cout << "basis " << b.name << "  " << tag << "  (" << status << ")\n";
    std::cout << "  A = " << d.triple.A.str() << "\n";
    std::cout << "  B = " << d.triple.B.str() << "\n";
    std::cout << "  D = " << d.triple.D.str() << "\n";
    std::cout << "  constraint: " << d.constraint.str() << "\n";
    if (b.triple_override && d.status == "derived")
      std::cout << "  note: the basis overrides A, B, D with values the defining functions do not produce\n";
    return 0;
  }
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  if (format != "json") std::cout << "basis " << b.name << ": Poisson brackets of the generators (i stripped)\n";
  for (std::size_t i = 0; i < b.generators.size(); ++i)
    for (std::size_t k = i + 1; k < b.generators.size(); ++k) {
      const auto& ga = b.generators[i];
      const auto& gb = b.generators[k];
      const cli::BracketOutcome out = cli::compute_bracket(cfg, ga.symbol(), gb.symbol(), {}, true);
      const std::string value = out.generators ? out.generators->str() : out.phase_space.str();
      if (format == "json") {
        rows.push_back({{"a", ga.name},
                        {"b", gb.name},
                        {"value", value},
                        {"in_generators", out.generators.has_value()},
                        {"on_shell", out.on_shell}});
      } else {
        std::cout << "  {" << ga.name << ", " << gb.name << "} = " << value;
        if (!out.generators) std::cout << "   [SR variables]";
        if (out.on_shell) std::cout << "   [on-shell]";
        std::cout << "\n";
      }
    }
  if (format == "json") std::cout << nlohmann::ordered_json{{"basis", b.name}, {"relations", rows}}.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpa: symbolic checks of deformed Poincare algebras"};
  app.require_subcommand(1);

  cli::SuiteConfig opts;
  std::string suites = "all";
  std::string mode;

  auto* verify = app.add_subcommand("verify", "Run verification suites on a basis");
  verify->add_option("--basis", opts.basis, "sr, dsr1, dual, a config path or path#name")->capture_default_str();
  verify->add_option("--suite", suites, "Comma list of suites or all")->capture_default_str();
  verify->add_option("--mode", mode, "exact, shell or numeric (default: exact with shell fallback)")
      ->check(CLI::IsMember({"exact", "shell", "numeric"}));
  verify->add_option("--seed", opts.seed, "Sampler seed")->capture_default_str();
  verify->add_option("--samples", opts.samples, "Numeric sample points per check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--tolerance", opts.tolerance, "Relative numeric tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify->add_option("--order", opts.order, "Series order for the limits suite")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  verify->add_option("--format", opts.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  verify->add_option("--jobs,-j", opts.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_flag("--timing", opts.timing, "Report wall time");

  std::string basis = "sr";
  std::string a;
  std::string b;
  std::string engine = "poisson";
  std::string format = "text";
  auto* bracket = app.add_subcommand("bracket", "Bracket of two expressions in a basis");
  bracket->add_option("a", a, "First expression")->required();
  bracket->add_option("b", b, "Second expression")->required();
  bracket->add_option("--basis", basis, "Basis")->capture_default_str();
  bracket->add_option("--engine", engine, "poisson or table")
      ->check(CLI::IsMember({"poisson", "table"}))
      ->capture_default_str();
  bracket->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string what = "abd";
  auto* derive = app.add_subcommand("derive", "Derive the deformation triple or the relation table");
  derive->add_option("--basis", basis, "Basis")->capture_default_str();
  derive->add_option("--what", what, "abd or table")->check(CLI::IsMember({"abd", "table"}))->capture_default_str();
  derive->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* tags = app.add_subcommand("tags", "Print the relation-to-tag table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(opts, suites, mode);
    if (bracket->parsed()) return run_bracket(basis, a, b, engine, format);
    if (derive->parsed()) return run_derive(basis, what, format);
    if (tags->parsed()) {
      for (const auto& t : canonical::tag_table()) std::cout << t.tag << "\t" << t.key << "\t" << t.claim << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "kpa: config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "kpa: parse error: " << e.what() << "\n";
    return 2;
  } catch (const UnknownIdentifier& e) {
    std::cerr << "kpa: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "kpa: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
