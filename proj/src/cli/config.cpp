#include "kpa/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "kpa/expr/errors.hpp"
#include "kpa/expr/expr.hpp"
#include "kpa/expr/parser.hpp"

namespace kpa::cli {

using expr::Normal;

namespace {

std::string trim(std::string s) {
  const char* ws = " \t\r\n";
  s.erase(0, s.find_first_not_of(ws));
  const auto end = s.find_last_not_of(ws);
  s.erase(end == std::string::npos ? 0 : end + 1);
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Line {
  int number = 0;
  std::string key;
  std::string value;
};

struct Section {
  std::string type;  // basis | coalgebra
  std::string name;
  int line = 0;
  std::vector<Line> entries;
};

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

expr::SymbolTable config_symbols() {
  expr::SymbolTable t = expr::SymbolTable::standard();
  for (const auto* s : {"P0", "Psq", "X0bar", "Xsqbar"}) t.add_symbol(s);
  return t;
}

Normal parse_value(const std::string& origin, const Line& l, const expr::SymbolTable& table, bool expand) {
  try {
    return expr::to_normal(expr::parse(l.value, table, expr::ParseOptions{expand}));
  } catch (const Error& e) {
    fail(origin, l.number, "in '" + l.key + "': " + e.what());
  }
}

bool parse_bool(const std::string& origin, const Line& l) {
  if (l.value == "on" || l.value == "true" || l.value == "yes" || l.value == "1") return true;
  if (l.value == "off" || l.value == "false" || l.value == "no" || l.value == "0") return false;
  fail(origin, l.number, "expected on/off for '" + l.key + "', got '" + l.value + "'");
}

bases::Basis build_basis(const std::string& origin, const Section& s) {
  const expr::SymbolTable table = config_symbols();
  std::map<std::string, const Line*> keys;
  std::vector<const Line*> overrides;
  static const std::vector<std::string> known{"kind", "f", "g", "F", "G", "shell", "base", "naming", "A", "B", "D"};
  for (const auto& l : s.entries) {
    const bool generator_key = !l.key.empty() && std::isupper(static_cast<unsigned char>(l.key[0])) &&
                               l.key.size() >= 2 && std::isdigit(static_cast<unsigned char>(l.key[1]));
    if (l.key.rfind("boost_", 0) == 0 || generator_key) {
      overrides.push_back(&l);
      continue;
    }
    if (std::find(known.begin(), known.end(), l.key) == known.end())
      fail(origin, l.number, "unknown key '" + l.key + "' in basis section");
    if (keys.count(l.key)) fail(origin, l.number, "duplicate key '" + l.key + "'");
    keys[l.key] = &l;
  }

  bases::Basis b;
  if (keys.count("base")) {
    const Line& l = *keys["base"];
    for (const auto* k : {"f", "g", "F", "G", "kind"})
      if (keys.count(k)) fail(origin, keys[k]->number, std::string("'") + k + "' cannot be combined with 'base'");
    if (!overrides.empty()) fail(origin, overrides.front()->number, "generator overrides need explicit functions");
    try {
      b = bases::builtin_basis(l.value);
    } catch (const ConfigError& e) {
      fail(origin, l.number, e.what());
    }
    b.name = s.name;
    if (keys.count("shell")) b.shell = parse_bool(origin, *keys["shell"]);
  } else {
    // Values present are checked before missing keys so errors point at the offending line.
    bases::DefiningFunctions df;
    if (keys.count("kind")) {
      const std::string& kind = keys["kind"]->value;
      if (kind == "momentum") {
        df.kind = bases::SectorKind::Momentum;
      } else if (kind == "spacetime") {
        df.kind = bases::SectorKind::Spacetime;
      } else {
        fail(origin, keys["kind"]->number, "kind must be momentum or spacetime, got '" + kind + "'");
      }
    }
    std::map<std::string, Normal> fn;
    for (const auto* k : {"f", "g", "F", "G"})
      if (keys.count(k)) fn[k] = parse_value(origin, *keys[k], table, false);
    for (const auto* k : {"kind", "f", "g", "F", "G"})
      if (!keys.count(k)) fail(origin, s.line, std::string("basis '") + s.name + "' is missing '" + k + "'");
    df.f = fn["f"];
    df.g = fn["g"];
    df.F = fn["F"];
    df.G = fn["G"];
    bases::Overrides ov;
    for (const Line* l : overrides) {
      std::string name = l->key;
      if (name.rfind("boost_", 0) == 0) name = "N" + name.substr(6);
      ov[name] = parse_value(origin, *l, table, true);
    }
    const bool shell = keys.count("shell") ? parse_bool(origin, *keys["shell"]) : false;
    const std::string naming = keys.count("naming") ? keys["naming"]->value : std::string{};
    try {
      b = bases::basis_from_functions(df, s.name, ov, shell, naming);
    } catch (const ConfigError& e) {
      fail(origin, s.line, e.what());
    }
  }

  if (keys.count("A") || keys.count("B") || keys.count("D")) {
    bases::DeformationTriple t = bases::effective_triple(b);
    if (keys.count("A")) t.A = parse_value(origin, *keys["A"], table, false);
    if (keys.count("B")) t.B = parse_value(origin, *keys["B"], table, false);
    if (keys.count("D")) t.D = parse_value(origin, *keys["D"], table, false);
    b.triple_override = t;
  }
  return b;
}

hopf::Coproduct build_coalgebra(const std::string& origin, const Section& s) {
  std::map<std::string, const Line*> keys;
  std::vector<const Line*> images;
  for (const auto& l : s.entries) {
    if (l.key.rfind("coproduct ", 0) == 0) {
      images.push_back(&l);
      continue;
    }
    if (l.key != "sector" && l.key != "generators" && l.key != "partners" && l.key != "builtin")
      fail(origin, l.number, "unknown key '" + l.key + "' in coalgebra section");
    keys[l.key] = &l;
  }
  if (keys.count("builtin")) {
    try {
      hopf::Coproduct c = hopf::builtin_coproduct(keys["builtin"]->value);
      c.name = s.name;
      return c;
    } catch (const Error& e) {
      fail(origin, keys["builtin"]->number, e.what());
    }
  }
  for (const auto* k : {"sector", "generators", "partners"})
    if (!keys.count(k)) fail(origin, s.line, std::string("coalgebra '") + s.name + "' is missing '" + k + "'");
  hopf::Coproduct c;
  c.name = s.name;
  const std::string& sector = keys["sector"]->value;
  if (sector == "momenta") {
    c.sector = hopf::Sector::Momenta;
  } else if (sector == "coordinates") {
    c.sector = hopf::Sector::Coordinates;
  } else {
    fail(origin, keys["sector"]->number, "sector must be momenta or coordinates");
  }
  c.generators = split_list(keys["generators"]->value);
  c.partners = split_list(keys["partners"]->value);
  if (c.generators.size() != 4 || c.partners.size() != 4)
    fail(origin, s.line, "coalgebra '" + s.name + "' needs four generators and four partners");
  expr::SymbolTable table = config_symbols();
  for (const auto& g : c.generators) table.add_symbol(g);
  std::map<std::string, hopf::TensorExpr> parsed;
  for (const Line* l : images) {
    const std::string g = trim(l->key.substr(10));
    if (std::find(c.generators.begin(), c.generators.end(), g) == c.generators.end())
      fail(origin, l->number, "coproduct of unknown generator '" + g + "'");
    try {
      parsed[g] = hopf::parse_tensor(l->value, table, c.generators);
    } catch (const Error& e) {
      fail(origin, l->number, e.what());
    }
  }
  for (const auto& g : c.generators) {
    auto it = parsed.find(g);
    if (it == parsed.end()) fail(origin, s.line, "coalgebra '" + s.name + "' has no coproduct for " + g);
    c.images.push_back(it->second);
  }
  return c;
}

}  // namespace

ConfigFile parse_config(const std::string& text, const std::string& origin) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, number, "unterminated section header");
      std::string inner = trim(line.substr(1, line.size() - 2));
      const auto q1 = inner.find('"');
      const auto q2 = inner.rfind('"');
      if (q1 == std::string::npos || q2 == q1) fail(origin, number, "section needs a quoted name");
      Section s;
      s.type = trim(inner.substr(0, q1));
      s.name = inner.substr(q1 + 1, q2 - q1 - 1);
      s.line = number;
      if (s.type != "basis" && s.type != "coalgebra") fail(origin, number, "unknown section type '" + s.type + "'");
      if (s.name.empty()) fail(origin, number, "empty section name");
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, number, "expected 'key = value'");
    if (sections.empty()) fail(origin, number, "entry outside of a section");
    Line l{number, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (l.key.empty() || l.value.empty()) fail(origin, number, "empty key or value");
    sections.back().entries.push_back(std::move(l));
  }

  ConfigFile cfg;
  for (const auto& s : sections) {
    if (s.type == "basis") {
      cfg.bases.push_back(BasisConfig{build_basis(origin, s), {}});
    } else {
      cfg.coalgebras.push_back(build_coalgebra(origin, s));
    }
  }
  // Coalgebras are shared by every basis of the file.
  for (auto& b : cfg.bases) b.coalgebras = cfg.coalgebras;
  return cfg;
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

BasisConfig resolve_basis(const std::string& selector) {
  if (selector == "sr" || selector == "dsr1" || selector == "dual") return BasisConfig{bases::builtin_basis(selector), {}};
  std::string path = selector;
  std::string name;
  if (const auto hash = selector.rfind('#'); hash != std::string::npos) {
    path = selector.substr(0, hash);
    name = selector.substr(hash + 1);
  }
  ConfigFile cfg = load_config(path);
  if (cfg.bases.empty()) throw ConfigError(path + ": no basis section");
  if (name.empty()) return cfg.bases.front();
  for (auto& b : cfg.bases)
    if (b.basis.name == name) return b;
  throw ConfigError(path + ": no basis named '" + name + "'");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lorentz", "rotation-action", "boost-action", "phase-space", "jacobi",
                                              "constraint", "inverses", "onshell", "limits", "coalgebra"};
  return names;
}

std::vector<std::string> parse_suite_list(const std::string& list) {
  std::vector<std::string> out;
  for (const auto& s : split_list(list)) {
    if (s == "all") {
      for (const auto& n : suite_names())
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
      continue;
    }
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw ConfigError("unknown suite '" + s + "'");
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

}  // namespace kpa::cli
