// Line-based configuration files and the named catalog of instances.
//
//   mode polytope|quadrics|double
//   A <n> <m>        followed by n rows of m integers (columns = facet normals)
//   b <r_1> ... <r_m>
//   gamma <k> <m>    followed by k rows
//   c <r_1> ... <r_k>
//   delta <k> <m>    followed by k rows (double mode)
//   d <r_1> ... <r_k>
//   l <int>
//   seed <u64>
//   tol <name> <float>
//
// Rationals are written p/q. '#' starts a comment.
#pragma once

#include <cstdint>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/exact_linalg.hpp"
#include "toric/polytope.hpp"
#include "toric/quadric_config.hpp"
#include "toric/reduction_catalog.hpp"

namespace toric {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ConfigMode { Polytope, Quadrics, Double };

struct ConfigFile {
  ConfigMode mode = ConfigMode::Polytope;
  IntegerMatrix a;  // n x m
  RationalVector b;
  IntegerMatrix gamma;
  RationalVector c;
  IntegerMatrix delta;
  RationalVector d;
  std::optional<int> l;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;

  friend bool operator==(const ConfigFile&, const ConfigFile&) = default;
};

namespace detail {

inline Rational parse_rational(const std::string& tok) {
  try {
    const auto slash = tok.find('/');
    if (slash == std::string::npos) return Rational(Integer(tok));
    const Integer den(tok.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in '" + tok + "'");
    return Rational(Integer(tok.substr(0, slash)), den);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("not a rational number: '" + tok + "'");
  }
}

inline Integer parse_integer(const std::string& tok) {
  if (tok.empty() || tok.find_first_not_of("+-0123456789") != std::string::npos)
    throw ParseError("not an integer: '" + tok + "'");
  try {
    return Integer(tok);
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + tok + "'");
  }
}

inline std::size_t parse_size(const std::string& tok) {
  const Integer v = parse_integer(tok);
  if (v < 0 || v > 1000000) throw ParseError("bad size: '" + tok + "'");
  return v.convert_to<std::size_t>();
}

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline ConfigFile parse_config(std::istream& in) {
  ConfigFile cfg;
  bool have_mode = false, have_a = false, have_b = false, have_gamma = false, have_c = false, have_delta = false,
       have_d = false;
  std::vector<std::vector<std::string>> lines;
  for (std::string line; std::getline(in, line);) {
    auto t = detail::tokens(line);
    if (!t.empty()) lines.push_back(std::move(t));
  }
  auto read_matrix = [&](std::size_t& i, const std::vector<std::string>& head) {
    if (head.size() != 3) throw ParseError(head[0] + ": expected '" + head[0] + " <rows> <cols>'");
    const std::size_t r = detail::parse_size(head[1]), c = detail::parse_size(head[2]);
    IntegerMatrix m(r, c);
    for (std::size_t row = 0; row < r; ++row) {
      if (++i >= lines.size()) throw ParseError(head[0] + ": missing rows");
      if (lines[i].size() != c) throw ParseError(head[0] + ": row " + std::to_string(row + 1) + " has wrong length");
      for (std::size_t col = 0; col < c; ++col) m(row, col) = detail::parse_integer(lines[i][col]);
    }
    return m;
  };
  auto read_vector = [](const std::vector<std::string>& t) {
    RationalVector v;
    for (std::size_t k = 1; k < t.size(); ++k) v.push_back(detail::parse_rational(t[k]));
    return v;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& t = lines[i];
    const std::string& key = t[0];
    if (key == "mode") {
      if (t.size() != 2) throw ParseError("mode: expected one word");
      if (t[1] == "polytope")
        cfg.mode = ConfigMode::Polytope;
      else if (t[1] == "quadrics")
        cfg.mode = ConfigMode::Quadrics;
      else if (t[1] == "double")
        cfg.mode = ConfigMode::Double;
      else
        throw ParseError("unknown mode '" + t[1] + "'");
      have_mode = true;
    } else if (key == "A") {
      cfg.a = read_matrix(i, t);
      have_a = true;
    } else if (key == "gamma") {
      cfg.gamma = read_matrix(i, t);
      have_gamma = true;
    } else if (key == "delta") {
      cfg.delta = read_matrix(i, t);
      have_delta = true;
    } else if (key == "b") {
      cfg.b = read_vector(t);
      have_b = true;
    } else if (key == "c") {
      cfg.c = read_vector(t);
      have_c = true;
    } else if (key == "d") {
      cfg.d = read_vector(t);
      have_d = true;
    } else if (key == "l") {
      if (t.size() != 2) throw ParseError("l: expected one integer");
      cfg.l = detail::parse_integer(t[1]).convert_to<int>();
    } else if (key == "seed") {
      if (t.size() != 2) throw ParseError("seed: expected one integer");
      const Integer s = detail::parse_integer(t[1]);
      if (s < 0) throw ParseError("seed must be nonnegative");
      cfg.seed = s.convert_to<std::uint64_t>();
    } else if (key == "tol") {
      if (t.size() != 3) throw ParseError("tol: expected 'tol <name> <value>'");
      char* end = nullptr;
      const double v = std::strtod(t[2].c_str(), &end);
      if (end == t[2].c_str() || *end != '\0' || !(v > 0)) throw ParseError("tol: bad value '" + t[2] + "'");
      cfg.tolerances[t[1]] = v;
    } else {
      throw ParseError("unknown key '" + key + "'");
    }
  }

  if (!have_mode) throw ParseError("missing 'mode' line");
  if (cfg.mode == ConfigMode::Polytope) {
    if (!have_a || !have_b) throw ParseError("polytope mode needs A and b");
    if (cfg.b.size() != cfg.a.cols()) throw ParseError("b must have one entry per column of A");
    if (have_gamma || have_delta) throw ParseError("polytope mode takes no gamma/delta");
  } else {
    if (!have_gamma || !have_c) throw ParseError("quadric modes need gamma and c");
    if (cfg.c.size() != cfg.gamma.rows()) throw ParseError("c must have one entry per row of gamma");
    if (have_a || have_b) throw ParseError("quadric modes take no A/b");
    if (cfg.mode == ConfigMode::Double) {
      if (!have_delta || !have_d) throw ParseError("double mode needs delta and d");
      if (cfg.d.size() != cfg.delta.rows()) throw ParseError("d must have one entry per row of delta");
      if (cfg.delta.cols() != cfg.gamma.cols()) throw ParseError("gamma and delta have different column counts");
    } else if (have_delta || have_d) {
      throw ParseError("delta/d only allowed in double mode");
    }
  }
  return cfg;
}

inline ConfigFile parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

/// Canonical text form; parse_config(print_config(x)) == x.
inline std::string print_config(const ConfigFile& cfg) {
  std::ostringstream out;
  auto matrix = [&](const char* name, const IntegerMatrix& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j).str();
      out << '\n';
    }
  };
  auto vector = [&](const char* name, const RationalVector& v) {
    out << name;
    for (const auto& x : v) out << ' ' << to_string(x);
    out << '\n';
  };
  switch (cfg.mode) {
    case ConfigMode::Polytope:
      out << "mode polytope\n";
      matrix("A", cfg.a);
      vector("b", cfg.b);
      break;
    case ConfigMode::Quadrics:
    case ConfigMode::Double:
      out << (cfg.mode == ConfigMode::Double ? "mode double\n" : "mode quadrics\n");
      matrix("gamma", cfg.gamma);
      vector("c", cfg.c);
      if (cfg.mode == ConfigMode::Double) {
        matrix("delta", cfg.delta);
        vector("d", cfg.d);
      }
      break;
  }
  if (cfg.l) out << "l " << *cfg.l << '\n';
  if (cfg.seed) out << "seed " << *cfg.seed << '\n';
  for (const auto& [name, v] : cfg.tolerances) out << "tol " << name << ' ' << detail::format_double(v) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// instances

inline PolytopePresentation polytope_of(const ConfigFile& cfg) {
  if (cfg.mode != ConfigMode::Polytope) throw PreconditionError("configuration is not a polytope");
  return PolytopePresentation::from_columns(cfg.a, cfg.b);
}

/// The quadric configuration of a config: Gale dual of the polytope, or the
/// given Gamma (the Gamma part for double configurations).
inline QuadricConfiguration quadrics_of(const ConfigFile& cfg) {
  if (cfg.mode == ConfigMode::Polytope) return gale_dual(polytope_of(cfg));
  return QuadricConfiguration(cfg.gamma, cfg.c);
}

inline StackResult double_of(const ConfigFile& cfg) {
  if (cfg.mode != ConfigMode::Double) throw PreconditionError("configuration is not a double configuration");
  return stack_double(QuadricConfiguration(cfg.gamma, cfg.c), QuadricConfiguration(cfg.delta, cfg.d));
}

// ---------------------------------------------------------------------------
// catalog

class UnknownCatalogName : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline ConfigFile polytope_config(const std::vector<std::vector<int>>& normals, const std::vector<int>& offsets) {
  ConfigFile cfg;
  cfg.mode = ConfigMode::Polytope;
  const std::size_t m = normals.size(), n = normals.front().size();
  cfg.a = IntegerMatrix(n, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) cfg.a(j, i) = normals[i][j];
  for (const int o : offsets) cfg.b.emplace_back(o);
  return cfg;
}

// normals e_1..e_n and -(1,...,1); offsets (0,...,0,1)
inline void append_simplex(std::vector<std::vector<int>>& normals, std::vector<int>& offsets, std::size_t n,
                           std::size_t offset_col, std::size_t total) {
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> e(total, 0);
    e[offset_col + i] = 1;
    normals.push_back(e);
    offsets.push_back(0);
  }
  std::vector<int> s(total, 0);
  for (std::size_t i = 0; i < n; ++i) s[offset_col + i] = -1;
  normals.push_back(s);
  offsets.push_back(1);
}

inline std::vector<int> parse_params(const std::string& text, std::size_t count) {
  std::vector<int> out;
  std::stringstream in(text);
  for (std::string tok; std::getline(in, tok, ',');) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 3)
      throw UnknownCatalogName("bad catalog parameter '" + tok + "'");
    out.push_back(std::stoi(tok));
  }
  if (out.size() != count) throw UnknownCatalogName("wrong number of catalog parameters in '" + text + "'");
  return out;
}

}  // namespace detail

/// Names: triangle, triangle-nondelzant, square, simplex:n,
/// simplex-product:p,q, one-quadric:m, two-quadrics:p,q, cp2-torus, rp2.
inline ConfigFile catalog_config(const std::string& name) {
  const auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : name.substr(colon + 1);
  auto no_args = [&] {
    if (colon != std::string::npos) throw UnknownCatalogName("catalog entry '" + head + "' takes no parameters");
  };

  if (head == "triangle") {
    no_args();
    return detail::polytope_config({{1, 0}, {0, 1}, {-1, -1}}, {0, 0, 1});
  }
  if (head == "triangle-nondelzant") {
    no_args();
    return detail::polytope_config({{1, 0}, {0, 1}, {-1, -2}}, {0, 0, 1});
  }
  if (head == "square") {
    no_args();
    return detail::polytope_config({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {0, 0, 1, 1});
  }
  if (head == "simplex") {
    const int n = detail::parse_params(args, 1)[0];
    if (n < 1 || n > 12) throw UnknownCatalogName("simplex dimension out of range");
    std::vector<std::vector<int>> normals;
    std::vector<int> offsets;
    detail::append_simplex(normals, offsets, static_cast<std::size_t>(n), 0, static_cast<std::size_t>(n));
    return detail::polytope_config(normals, offsets);
  }
  if (head == "simplex-product") {
    const auto pq = detail::parse_params(args, 2);
    if (pq[0] < 2 || pq[1] < 2 || pq[0] + pq[1] > 14) throw UnknownCatalogName("simplex-product: need p, q >= 2");
    const auto a = static_cast<std::size_t>(pq[0] - 1), b = static_cast<std::size_t>(pq[1] - 1);
    std::vector<std::vector<int>> normals;
    std::vector<int> offsets;
    detail::append_simplex(normals, offsets, a, 0, a + b);
    detail::append_simplex(normals, offsets, b, a, a + b);
    return detail::polytope_config(normals, offsets);
  }
  if (head == "one-quadric") {
    const int m = detail::parse_params(args, 1)[0];
    if (m < 1 || m > 14) throw UnknownCatalogName("one-quadric: m out of range");
    ConfigFile cfg;
    cfg.mode = ConfigMode::Quadrics;
    cfg.gamma = IntegerMatrix(1, static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) cfg.gamma(0, static_cast<std::size_t>(k)) = 1;
    cfg.c = {Rational(1)};
    return cfg;
  }
  if (head == "two-quadrics") {
    const auto pq = detail::parse_params(args, 2);
    if (pq[0] < 1 || pq[1] < 1 || pq[0] + pq[1] > 14) throw UnknownCatalogName("two-quadrics: need p, q >= 1");
    const auto m = static_cast<std::size_t>(pq[0] + pq[1]);
    ConfigFile cfg;
    cfg.mode = ConfigMode::Quadrics;
    cfg.gamma = IntegerMatrix(2, m);
    for (std::size_t k = 0; k < m; ++k) {
      cfg.gamma(0, k) = 1;
      cfg.gamma(1, k) = k < static_cast<std::size_t>(pq[0]) ? 1 : -1;
    }
    cfg.c = {Rational(2), Rational(0)};
    return cfg;
  }
  if (head == "cp2-torus") {
    no_args();
    ConfigFile cfg;
    cfg.mode = ConfigMode::Double;
    cfg.gamma = IntegerMatrix{{1, 1, 1}};
    cfg.c = {Rational(2)};
    cfg.delta = IntegerMatrix{{1, 1, 2}};
    cfg.d = {Rational(3)};
    return cfg;
  }
  if (head == "rp2") {
    no_args();
    ConfigFile cfg;
    cfg.mode = ConfigMode::Double;
    cfg.gamma = IntegerMatrix{{1, 1, 1}};
    cfg.c = {Rational(1)};
    cfg.delta = IntegerMatrix(0, 3);
    return cfg;
  }
  throw UnknownCatalogName("unknown catalog name '" + name + "'");
}

inline std::vector<std::string> catalog_names() {
  return {"triangle",          "triangle-nondelzant", "square",         "simplex:2",    "simplex:3",
          "simplex:4",         "simplex-product:2,2", "simplex-product:2,3", "simplex-product:3,3",
          "one-quadric:2",     "one-quadric:3",       "one-quadric:4",  "two-quadrics:2,2", "cp2-torus", "rp2"};
}

}  // namespace toric
