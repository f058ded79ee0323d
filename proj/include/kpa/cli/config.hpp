#ifndef KPA_CLI_CONFIG_HPP
#define KPA_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kpa/bases/basis.hpp"
#include "kpa/expr/equality.hpp"
#include "kpa/hopf/coproduct.hpp"

namespace kpa::cli {

/// A basis together with the coproducts declared next to it.
struct BasisConfig {
  bases::Basis basis;
  std::vector<hopf::Coproduct> coalgebras;
};

struct ConfigFile {
  std::vector<BasisConfig> bases;
  std::vector<hopf::Coproduct> coalgebras;
};

/// Parses the INI-like config format:
///
///   [basis "name"]            kind, f, g, F, G, shell, base, naming, A, B, D,
///                             boost_i and generator overrides (X0.., P0..)
///   [coalgebra "name"]        sector, generators, partners, builtin,
///                             coproduct <gen> = <a>(x)<b> + ...
///
/// Throws ConfigError (message carries the line number).
ConfigFile parse_config(const std::string& text, const std::string& origin = "<config>");
ConfigFile load_config(const std::string& path);

/// Built-in name, "path" (first basis of the file) or "path#name".
BasisConfig resolve_basis(const std::string& selector);

/// lorentz, rotation-action, boost-action, phase-space, jacobi, constraint,
/// inverses, onshell, limits, coalgebra.
const std::vector<std::string>& suite_names();

/// Shared with verify: everything the suites need besides the basis.
struct SuiteConfig {
  std::string basis = "sr";
  std::vector<std::string> suites = suite_names();
  /// Unset means auto: exact, falling back to the mass shell where the basis has one.
  std::optional<expr::EqualityMode> mode;
  std::uint64_t seed = 42;
  int samples = 100;
  double tolerance = 1e-9;
  int order = 2;
  std::string format = "text";
  int jobs = 1;
  bool timing = false;
};

/// Splits a comma list, expands "all" and rejects unknown names. An empty
/// list selects nothing.
std::vector<std::string> parse_suite_list(const std::string& list);

}  // namespace kpa::cli

#endif  // KPA_CLI_CONFIG_HPP
