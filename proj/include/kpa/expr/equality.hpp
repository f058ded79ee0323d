#ifndef KPA_EXPR_EQUALITY_HPP
#define KPA_EXPR_EQUALITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "kpa/expr/eval.hpp"
#include "kpa/expr/normal.hpp"

namespace kpa::expr {

enum class EqualityMode { Exact, Shell, Numeric };

std::string to_string(EqualityMode m);

struct NumericOptions {
  std::uint64_t seed = 20240601;
  std::string tag = "equal";
  int points = 50;
  Real tolerance = 1e-9L;
  bool on_shell = false;
  /// Optional preparation of each sampled point (e.g. deformed generator values).
  std::function<void(PhasePoint&)> prepare;
};

/// Numeric comparison over sampled points.
struct NumericEvidence {
  bool pass = true;
  int points = 0;
  Real max_deviation = 0;
  std::optional<PhasePoint> worst;
  Real worst_lhs = 0;
  Real worst_rhs = 0;
};

struct Verdict {
  bool pass = false;
  EqualityMode mode = EqualityMode::Exact;
  /// Exact normalization exceeded the size budget; decided numerically.
  bool numeric_only = false;
  Normal residual;
  NumericEvidence evidence;
  /// Context for the report, e.g. an exact counterexample behind a shell pass.
  std::string note;
};

/// The substitution p0 -> +sqrt(m^2 + p1^2 + p2^2 + p3^2).
Normal shell_reduce(const Normal& e);

NumericEvidence numeric_compare(const Normal& a, const Normal& b, const NumericOptions& options);

/// Exact: normalize(a - b) = 0. Shell: the same after shell_reduce. Numeric:
/// sampled relative deviation below tolerance. Exact and shell verdicts also
/// carry numeric evidence from the same sampler.
Verdict equal(const Normal& a, const Normal& b, EqualityMode mode, const NumericOptions& options = {},
              std::size_t term_budget = 200000);

}  // namespace kpa::expr

#endif  // KPA_EXPR_EQUALITY_HPP
