#include "kpa/expr/eval.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <shared_mutex>

#include "kpa/expr/errors.hpp"

namespace kpa::expr {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Real to_real(const Rational& q) {
  return static_cast<Real>(q.get_num().get_d()) / static_cast<Real>(q.get_den().get_d());
}

// Dual-number arithmetic -----------------------------------------------------

Dual operator+(const Dual& a, const Dual& b) {
  Dual r{a.v + b.v, a.d};
  for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] += b.d[i];
  return r;
}
Dual operator*(const Dual& a, const Dual& b) {
  Dual r{a.v * b.v, std::vector<Real>(a.d.size())};
  for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  return r;
}
Dual scale(const Dual& a, Real s, Real value) {
  Dual r{value, a.d};
  for (auto& x : r.d) x *= s;
  return r;
}

template <class T>
struct Num;

template <>
struct Num<Real> {
  static Real constant(Real c, std::size_t) { return c; }
  static Real value(Real x) { return x; }
  static Real add(Real a, Real b) { return a + b; }
  static Real mul(Real a, Real b) { return a * b; }
  static Real inv(Real a) { return 1 / a; }
  static Real exp(Real a) { return std::exp(a); }
  static Real log(Real a) { return std::log(a); }
  static Real sqrt(Real a) { return std::sqrt(a); }
};

template <>
struct Num<Dual> {
  static Dual constant(Real c, std::size_t n) { return Dual{c, std::vector<Real>(n, 0)}; }
  static Real value(const Dual& x) { return x.v; }
  static Dual add(const Dual& a, const Dual& b) { return a + b; }
  static Dual mul(const Dual& a, const Dual& b) { return a * b; }
  static Dual inv(const Dual& a) { return scale(a, -1 / (a.v * a.v), 1 / a.v); }
  static Dual exp(const Dual& a) {
    Real e = std::exp(a.v);
    return scale(a, e, e);
  }
  static Dual log(const Dual& a) { return scale(a, 1 / a.v, std::log(a.v)); }
  static Dual sqrt(const Dual& a) {
    Real s = std::sqrt(a.v);
    return scale(a, 1 / (2 * s), s);
  }
};

// Function models ------------------------------------------------------------

struct ModelTable {
  std::shared_mutex mutex;
  std::map<std::string, FunctionModel> models;
};

ModelTable& model_table() {
  static ModelTable t;
  return t;
}

Real model_value(const std::string& name, const std::vector<Real>& args, const std::vector<int>& orders) {
  auto& t = model_table();
  {
    std::shared_lock lock(t.mutex);
    auto it = t.models.find(name);
    if (it != t.models.end()) return it->second(args, orders);
  }
  return default_function_model(name, args, orders);
}

// Evaluator ------------------------------------------------------------------

template <class T>
class Evaluator {
 public:
  using N = Num<T>;

  Evaluator(const PhasePoint& pt, const std::vector<std::string>& directions, bool lenient)
      : pt_(pt), n_(directions.size()), lenient_(lenient) {
    for (std::size_t i = 0; i < directions.size(); ++i) dirs_.emplace(directions[i], i);
  }

  T symbol(const std::string& name) {
    if (!dirs_.count(name) && (name == "psq" || name == "xsq")) {
      const char c = name[0];
      T s = N::constant(0, n_);
      for (int i = 1; i <= 3; ++i) {
        T v = symbol(std::string(1, c) + std::to_string(i));
        s = N::add(s, N::mul(v, v));
      }
      return s;
    }
    Real v = 0;
    auto it = pt_.values.find(name);
    if (it != pt_.values.end()) {
      v = it->second;
    } else if (lenient_) {
      v = 0.15L + 0.3L * static_cast<Real>(fnv1a(name) % 1000003ULL) / 1000003.0L;
    } else {
      throw UnknownIdentifier("no numeric value for symbol '" + name + "'");
    }
    T r = N::constant(v, n_);
    if constexpr (std::is_same_v<T, Dual>) {
      auto d = dirs_.find(name);
      if (d != dirs_.end()) r.d[d->second] = 1;
    }
    return r;
  }

  T checked_sqrt(const T& a, const std::string& what) {
    if (N::value(a) < 0) throw DomainError("negative square-root argument in " + what);
    return N::sqrt(a);
  }
  T checked_log(const T& a, const std::string& what) {
    if (N::value(a) <= 0) throw DomainError("non-positive logarithm argument in " + what);
    return N::log(a);
  }
  T checked_inv(const T& a, const std::string& what) {
    if (N::value(a) == 0) throw DomainError("division by zero in " + what);
    return N::inv(a);
  }

  T function(const std::string& name, const std::vector<T>& args, const std::vector<int>& orders) {
    std::vector<Real> vals;
    for (const auto& a : args) vals.push_back(N::value(a));
    Real f = model_value(name, vals, orders);
    T r = N::constant(f, n_);
    if constexpr (std::is_same_v<T, Dual>) {
      for (std::size_t k = 0; k < args.size(); ++k) {
        auto o = orders;
        ++o[k];
        Real df = model_value(name, vals, o);
        for (std::size_t i = 0; i < n_; ++i) r.d[i] += df * args[k].d[i];
      }
    }
    return r;
  }

  T power(const T& base, int e, const std::string& what) {
    T b = e < 0 ? checked_inv(base, what) : base;
    T r = N::constant(1, n_);
    for (int k = 0; k < std::abs(e); ++k) r = N::mul(r, b);
    return r;
  }

  T expr(const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::Const: return N::constant(to_real(e.value()), n_);
      case Expr::Kind::Symbol: return symbol(e.name());
      case Expr::Kind::Sum: {
        T s = N::constant(0, n_);
        for (const auto& c : e.children()) s = N::add(s, expr(c));
        return s;
      }
      case Expr::Kind::Product: {
        T p = N::constant(1, n_);
        for (const auto& c : e.children()) p = N::mul(p, expr(c));
        return p;
      }
      case Expr::Kind::Power: return power(expr(e.children()[0]), e.exponent(), e.str());
      case Expr::Kind::Apply: {
        std::vector<T> args;
        for (const auto& c : e.children()) args.push_back(expr(c));
        switch (e.func()) {
          case Expr::Func::Exp: return N::exp(args[0]);
          case Expr::Func::Ln: return checked_log(args[0], e.str());
          case Expr::Func::Sqrt: return checked_sqrt(args[0], e.str());
          case Expr::Func::Sinh: {
            T a = N::exp(args[0]);
            T b = N::exp(N::mul(args[0], N::constant(-1, n_)));
            return N::mul(N::add(a, N::mul(b, N::constant(-1, n_))), N::constant(0.5L, n_));
          }
          case Expr::Func::Cosh: {
            T a = N::exp(args[0]);
            T b = N::exp(N::mul(args[0], N::constant(-1, n_)));
            return N::mul(N::add(a, b), N::constant(0.5L, n_));
          }
          case Expr::Func::Abstract: return function(e.name(), args, e.orders());
        }
      }
    }
    return N::constant(0, n_);
  }

  T var(VarId v) {
    auto it = memo_.find(v);
    if (it != memo_.end()) return it->second;
    const VarInfo& info = var_info(v);
    T r = N::constant(0, n_);
    switch (info.kind) {
      case AtomKind::Symbol: r = symbol(info.name); break;
      case AtomKind::Sqrt: r = checked_sqrt(normal(info.args[0]), info.key); break;
      case AtomKind::Exp: r = N::exp(normal(info.args[0])); break;
      case AtomKind::Ln: r = checked_log(normal(info.args[0]), info.key); break;
      case AtomKind::Function: {
        std::vector<T> args;
        for (const auto& a : info.args) args.push_back(normal(a));
        r = function(info.name, args, info.orders);
        break;
      }
    }
    memo_.emplace(v, r);
    return r;
  }

  T poly(const Poly& p) {
    T s = N::constant(0, n_);
    for (const auto& t : p.terms()) {
      T m = N::constant(to_real(t.coef), n_);
      for (const auto& [v, e] : t.mono.factors()) m = N::mul(m, power(var(v), e, var_info(v).key));
      s = N::add(s, m);
    }
    return s;
  }

  T normal(const Normal& e) {
    T num = poly(e.num());
    if (e.den().is_constant()) return num;
    return N::mul(num, checked_inv(poly(e.den()), "denominator of " + e.str()));
  }

 private:
  const PhasePoint& pt_;
  std::size_t n_;
  bool lenient_;
  std::map<std::string, std::size_t> dirs_;
  std::map<VarId, T> memo_;
};

}  // namespace

Real PhasePoint::at(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw UnknownIdentifier("no numeric value for symbol '" + name + "'");
  return it->second;
}

void PhasePoint::refresh_sugar() {
  auto sq = [this](char c) {
    Real s = 0;
    for (int i = 1; i <= 3; ++i) {
      auto it = values.find(std::string(1, c) + std::to_string(i));
      if (it != values.end()) s += it->second * it->second;
    }
    return s;
  };
  values["psq"] = sq('p');
  values["xsq"] = sq('x');
}

Real uniform(std::mt19937_64& rng, Real lo, Real hi) {
  Real u = static_cast<Real>(rng() >> 11U) * 0x1.0p-53L;
  return lo + (hi - lo) * u;
}

std::mt19937_64 tagged_rng(std::uint64_t seed, std::string_view tag) {
  return std::mt19937_64(seed ^ fnv1a(tag));
}

PhasePoint sample_point(std::mt19937_64& rng, bool on_shell) {
  PhasePoint pt;
  pt.on_shell = on_shell;
  Real kappa = uniform(rng, 0.5L, 2.0L);
  Real kappabar = uniform(rng, 0.5L, 2.0L);
  Real m = uniform(rng, 0.1L, 2.0L);
  pt.set("kappa", kappa);
  pt.set("kappabar", kappabar);
  pt.set("m", m);
  Real pp = 0;
  for (int i = 1; i <= 3; ++i) {
    Real p = uniform(rng, -1.0L, 1.0L);
    pp += p * p;
    pt.set("p" + std::to_string(i), p);
  }
  pt.set("p0", on_shell ? std::sqrt(m * m + pp) : uniform(rng, 1.0L, 3.0L));
  for (;;) {
    Real x[4];
    for (auto& c : x) c = uniform(rng, -1.0L, 1.0L);
    Real w2 = kappabar * kappabar * (x[0] * x[0] - x[1] * x[1] - x[2] * x[2] - x[3] * x[3]) + 1;
    if (w2 <= 0.25L) continue;
    if (kappabar * x[0] + std::sqrt(w2) <= 0.25L) continue;
    for (int i = 0; i < 4; ++i) pt.set("x" + std::to_string(i), x[i]);
    break;
  }
  pt.refresh_sugar();
  return pt;
}

const PhasePoint& reference_point() {
  static const PhasePoint pt = [] {
    PhasePoint p;
    p.values = {{"x0", 0.4L},  {"x1", 0.1L},  {"x2", -0.2L}, {"x3", 0.15L},    {"p0", 1.7L}, {"p1", 0.3L},
                {"p2", -0.4L}, {"p3", 0.5L}, {"kappa", 1.3L}, {"kappabar", 0.7L}, {"m", 0.6L}};
    p.refresh_sugar();
    return p;
  }();
  return pt;
}

void set_function_model(const std::string& name, FunctionModel model) {
  auto& t = model_table();
  std::unique_lock lock(t.mutex);
  t.models[name] = std::move(model);
}

Real default_function_model(const std::string& name, const std::vector<Real>& args, const std::vector<int>& orders) {
  std::uint64_t h = fnv1a(name);
  Real expo = 0;
  Real factor = 1;
  for (std::size_t k = 0; k < args.size(); ++k) {
    Real c = 0.2L + 0.1L * static_cast<Real>(k) + 0.05L * static_cast<Real>((h >> (8 * k)) % 7) / 7.0L;
    expo += c * args[k];
    for (int o = 0; o < (k < orders.size() ? orders[k] : 0); ++o) factor *= c;
  }
  return factor * std::exp(expo);
}

Real eval(const Expr& e, const PhasePoint& pt) { return Evaluator<Real>(pt, {}, false).expr(e); }
Real eval(const Normal& e, const PhasePoint& pt) { return Evaluator<Real>(pt, {}, false).normal(e); }

Dual eval_dual(const Expr& e, const PhasePoint& pt, const std::vector<std::string>& directions) {
  return Evaluator<Dual>(pt, directions, false).expr(e);
}
Dual eval_dual(const Normal& e, const PhasePoint& pt, const std::vector<std::string>& directions) {
  return Evaluator<Dual>(pt, directions, false).normal(e);
}

Real reference_value(const Normal& e) { return Evaluator<Real>(reference_point(), {}, true).normal(e); }

Real relative_deviation(Real a, Real b, Real abs_floor) {
  Real diff = std::fabs(a - b);
  Real scale = std::max({std::fabs(a), std::fabs(b), abs_floor});
  return diff / scale;
}

bool close(Real a, Real b, Real rel, Real abs_floor) {
  Real diff = std::fabs(a - b);
  return diff <= std::max(abs_floor, rel * std::max(std::fabs(a), std::fabs(b)));
}

std::string point_text(const PhasePoint& pt) {
  std::string s;
  for (const auto* k : {"x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3", "kappa", "kappabar", "m"}) {
    if (!s.empty()) s += ", ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6Lg", k, pt.at(k));
    s += buf;
  }
  return s;
}

}  // namespace kpa::expr
