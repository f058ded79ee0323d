#ifndef KPA_CLI_COMMANDS_HPP
#define KPA_CLI_COMMANDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "kpa/cli/config.hpp"
#include "kpa/expr/parser.hpp"

namespace kpa::cli {

/// Standard symbols plus the generators of the basis and the SR m_i, n_i.
expr::SymbolTable bracket_symbols(const bases::Basis& b);

/// Replaces generator symbols by their SR phase-space realizations.
expr::Normal to_phase_space(const bases::Basis& b, const expr::Normal& e);

/// Writes an SR phase-space expression as a combination of at most three
/// generators (or 1) with phase-space independent coefficients. Names in
/// `preferred` are tried first.
std::optional<expr::Normal> fit_generators(const bases::Basis& b, const expr::Normal& value,
                                           const std::vector<std::string>& preferred = {});

struct BracketOutcome {
  expr::Normal phase_space;  // Poisson bracket of the realizations
  std::optional<expr::Normal> generators;
  std::string method;  // fit | table | empty when only the phase-space form is known
  bool on_shell = false;
};

/// {a, b} by the Poisson engine, expressed in generators where possible. A
/// claimed-table value is used only after the Poisson result confirms it;
/// `table_first` tries it before the generator fit.
BracketOutcome compute_bracket(const BasisConfig& cfg, const expr::Normal& a, const expr::Normal& b,
                               const std::vector<std::string>& preferred = {}, bool table_first = false);

struct DerivedTriple {
  bases::DeformationTriple triple;
  /// exact | shell: the catalog form agrees; derived: no catalog or no agreement.
  std::string status;
  expr::Normal constraint;
};
DerivedTriple derive_triple(const BasisConfig& cfg);

/// Names of the generator symbols occurring in e, in order of first appearance in `text`.
std::vector<std::string> generators_in_text(const bases::Basis& b, const std::string& text);

}  // namespace kpa::cli

#endif  // KPA_CLI_COMMANDS_HPP
