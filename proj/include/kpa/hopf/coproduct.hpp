#ifndef KPA_HOPF_COPRODUCT_HPP
#define KPA_HOPF_COPRODUCT_HPP

#include <optional>
#include <string>
#include <vector>

#include "kpa/canonical/relation_table.hpp"
#include "kpa/expr/errors.hpp"
#include "kpa/expr/normal.hpp"
#include "kpa/expr/parser.hpp"

namespace kpa::hopf {

using expr::Normal;
using expr::Rational;
using expr::VarId;

/// Coproduct, twist-form or pairing requirement violated.
class HopfError : public Error {
 public:
  using Error::Error;
};

/// Element of an n-fold tensor power. Leg k of generator g is the symbol
/// "g@k"; legs commute with each other, so the product is leg-wise.
struct TensorExpr {
  int legs = 2;
  Normal value;

  [[nodiscard]] std::string str() const;
  friend TensorExpr operator+(const TensorExpr& a, const TensorExpr& b);
  friend TensorExpr operator-(const TensorExpr& a, const TensorExpr& b);
  friend TensorExpr operator*(const TensorExpr& a, const TensorExpr& b);
  friend bool operator==(const TensorExpr& a, const TensorExpr& b) { return a.legs == b.legs && a.value == b.value; }
};

std::string leg_name(const std::string& generator, int leg);
/// Places an expression over the given generators on one leg.
Normal on_leg(const Normal& e, const std::vector<std::string>& generators, int leg);
/// a (x) b.
TensorExpr tensor(const Normal& a, const Normal& b, const std::vector<std::string>& generators);

enum class Sector { Momenta, Coordinates };

struct Coproduct {
  std::string name;
  Sector sector = Sector::Momenta;
  std::vector<std::string> generators;  // index 0 is the time-like one
  std::vector<std::string> partners;    // dual-sector generators, same indexing
  std::vector<TensorExpr> images;       // Delta(generators[k])

  [[nodiscard]] const TensorExpr& image(const std::string& generator) const;
};

/// dsr1-momentum, dsr1-spacetime, dual-momentum, dual-spacetime, primitive,
/// primitive-spacetime, corrupted (twist exponent squared; negative control).
Coproduct builtin_coproduct(const std::string& name);
std::vector<std::string> builtin_coproduct_names();

/// Every generator primitive.
Coproduct primitive_coproduct(const std::string& name, Sector sector, std::vector<std::string> generators,
                              std::vector<std::string> partners);
/// Delta(Y_0) primitive, Delta(Y_i) = Y_i (x) 1 + exp(lambda Y_0) (x) Y_i.
Coproduct twist_coproduct(const std::string& name, Sector sector, std::vector<std::string> generators,
                          std::vector<std::string> partners, const Normal& lambda);

/// Parses "A(x)B + C(x)D - ..." with A..D in the generators of `table`.
TensorExpr parse_tensor(const std::string& text, const expr::SymbolTable& table,
                        const std::vector<std::string>& generators);

/// Delta extended as an algebra map. Exponentials are accepted when their
/// argument only involves primitive generators; other atoms are rejected.
TensorExpr apply_coproduct(const Coproduct& c, const Normal& e);

struct HopfCheck {
  bool pass = false;
  std::string generator;  // first failing generator or relation
  Normal residual;
  std::string detail;
};

/// (Delta (x) id) Delta = (id (x) Delta) Delta on every generator.
HopfCheck check_coassociativity(const Coproduct& c);
/// Sending one leg to the counit returns the generator on the other leg.
HopfCheck check_counit(const Coproduct& c);
/// Delta({a, b}) = {Delta a, Delta b} for every relation of the sector table.
HopfCheck check_homomorphism(const Coproduct& c, const canonical::RelationTable& relations);

/// <Y_mu, Z_nu> for Y in the coproduct's sector and Z its partner. The frozen
/// convention is the canonical SR bracket of the labels: <p, x> = -eta, <x, p> = eta.
struct Pairing {
  int sign = 1;
  [[nodiscard]] Rational value(Sector y_sector, int mu, int nu) const;
};

/// Lie bracket of the partner sector dual to the linearized cobracket.
/// Throws HopfError unless the coproduct has exponential-twist form.
canonical::RelationTable dualize_twist(const Coproduct& c, const Pairing& pairing = {});
/// The twist exponent lambda read off a twist-form coproduct.
Normal twist_parameter(const Coproduct& c);

/// Cross relations {Y, Z} = sum <Y_(1), Z> Y_(2) of the Heisenberg double,
/// where Y is the sector of the non-primitive coproduct. Both orders of
/// arguments are accepted; one coproduct must be primitive.
canonical::RelationTable heisenberg_cross(const Coproduct& momenta, const Coproduct& coordinates,
                                          const Pairing& pairing = {});

}  // namespace kpa::hopf

#endif  // KPA_HOPF_COPRODUCT_HPP
