#ifndef KPA_CLI_SUITES_HPP
#define KPA_CLI_SUITES_HPP

#include <string>

#include "kpa/canonical/bracket.hpp"
#include "kpa/canonical/report.hpp"
#include "kpa/cli/config.hpp"

namespace kpa::cli {

/// Numeric options for one check; the tag picks an independent sample stream.
expr::NumericOptions numeric_options(const SuiteConfig& opts, const std::string& tag);

/// Comparator honoring --mode. Without one: exact first, then the mass shell
/// for bases that have one, noting the exact counterexample.
canonical::Comparator comparator(const SuiteConfig& opts, const bases::Basis& b);

/// Claimed relations of the basis as an abstract algebra: the deformed sector
/// commutes, everything else is declared. Restricted to the given generators
/// when the list is non-empty.
canonical::AbstractAlgebra claimed_algebra(const bases::Basis& b, const std::vector<std::string>& only = {});

canonical::Report run_suite(const std::string& suite, const BasisConfig& b, const SuiteConfig& opts);

/// Runs the selected suites on up to opts.jobs threads; entries keep the
/// order of the suite list regardless of scheduling.
canonical::Report run_suites(const BasisConfig& b, const SuiteConfig& opts);

}  // namespace kpa::cli

#endif  // KPA_CLI_SUITES_HPP
