#ifndef KPA_EXPR_EVAL_HPP
#define KPA_EXPR_EVAL_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "kpa/expr/expr.hpp"
#include "kpa/expr/normal.hpp"

namespace kpa::expr {

using Real = long double;

/// Numeric values of x0..x3, p0..p3, kappa, kappabar, m and any extra symbols.
struct PhasePoint {
  std::map<std::string, Real> values;
  bool on_shell = false;

  [[nodiscard]] Real at(const std::string& name) const;
  void set(const std::string& name, Real v) { values[name] = v; }
  /// Recomputes the psq and xsq sugar values from the components.
  void refresh_sugar();
};

/// Uniform in [lo, hi) from the raw 53 high-quality bits of the generator.
Real uniform(std::mt19937_64& rng, Real lo, Real hi);
/// Generator seeded from a user seed mixed with a tag, so each check gets its own stream.
std::mt19937_64 tagged_rng(std::uint64_t seed, std::string_view tag);

/// Draws a domain-valid point; on shell p0 = +sqrt(m^2 + p.p).
PhasePoint sample_point(std::mt19937_64& rng, bool on_shell);

/// "x0=..., ..., m=..." for diagnostics.
std::string point_text(const PhasePoint& pt);

/// Fixed generic point used for branch decisions during normalization.
const PhasePoint& reference_point();

/// Numeric model of an abstract function and its partial derivatives.
using FunctionModel = std::function<Real(const std::vector<Real>& args, const std::vector<int>& orders)>;
void set_function_model(const std::string& name, FunctionModel model);
/// exp(sum_k c_k a_k) with fixed per-name c_k; used when no model is registered.
Real default_function_model(const std::string& name, const std::vector<Real>& args, const std::vector<int>& orders);

Real eval(const Expr& e, const PhasePoint& pt);
Real eval(const Normal& e, const PhasePoint& pt);

/// Value together with partial derivatives along the listed symbols.
struct Dual {
  Real v = 0;
  std::vector<Real> d;
};

Dual eval_dual(const Expr& e, const PhasePoint& pt, const std::vector<std::string>& directions);
Dual eval_dual(const Normal& e, const PhasePoint& pt, const std::vector<std::string>& directions);

/// Value at the reference point; unknown symbols get fixed generic values.
Real reference_value(const Normal& e);

/// |a - b| <= max(abs_floor, rel * max(|a|, |b|)).
bool close(Real a, Real b, Real rel = 1e-9L, Real abs_floor = 1e-12L);
Real relative_deviation(Real a, Real b, Real abs_floor = 1e-12L);

}  // namespace kpa::expr

#endif  // KPA_EXPR_EVAL_HPP
