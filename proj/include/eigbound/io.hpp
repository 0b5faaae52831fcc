#pragma once

// Plain-text matrix files. One `key = value` per line, `#` starts a comment.
//
//   format = tridiagonal          format = dense-hermitian     format = generator
//   diag = 1 2 3                  n = 2                        generator = wilkinson_split
//   offdiag = 0.5 0.5             row = 2 (0,-1)               n = 10
//                                 row = (0,1) 3                part = E
//
// Dense rows hold all n entries; a complex entry is written (re,im). The lower
// triangle is authoritative but the upper one must mirror it.

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "eigbound/eigcore.hpp"
#include "eigbound/matrix.hpp"

namespace eigbound {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = "")
      : std::runtime_error(prefix(source, line) + message), line_(line), message_(message) {}
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  static std::string prefix(const std::string& source, std::size_t line) {
    std::string p = source.empty() ? "" : source + ": ";
    return line ? p + "line " + std::to_string(line) + ": " : p;
  }
  std::size_t line_;
  std::string message_;
};

enum class MatrixFormat { dense_hermitian, tridiagonal, generator };

inline std::string to_string(MatrixFormat f) {
  switch (f) {
    case MatrixFormat::dense_hermitian: return "dense-hermitian";
    case MatrixFormat::tridiagonal: return "tridiagonal";
    case MatrixFormat::generator: return "generator";
  }
  return "unknown";
}

struct GeneratorSpec {
  std::string name;
  std::map<std::string, std::string> params;
  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

struct MatrixFile {
  std::string label;  ///< optional `name =` line
  std::variant<DenseHermitian, SymTridiagonal, GeneratorSpec> payload;

  MatrixFormat format() const { return static_cast<MatrixFormat>(payload.index()); }
  std::size_t order() const;
  DenseHermitian dense() const;
  /// Throws unless the matrix is real symmetric tridiagonal.
  SymTridiagonal tridiagonal() const;

  friend bool operator==(const MatrixFile&, const MatrixFile&) = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double parse_real(const std::string& tok, std::size_t line) {
  if (tok.empty()) throw ParseError(line, "empty number");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size()) throw ParseError(line, "not a number: '" + tok + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite value: '" + tok + "'");
  if (errno == ERANGE && std::fabs(v) > 1.0) throw ParseError(line, "value out of range: '" + tok + "'");
  return v;
}

inline cdouble parse_entry(const std::string& tok, std::size_t line) {
  if (tok.front() != '(') return parse_real(tok, line);
  const auto comma = tok.find(',');
  if (tok.back() != ')' || comma == std::string::npos)
    throw ParseError(line, "complex entries are written (re,im): '" + tok + "'");
  return {parse_real(tok.substr(1, comma - 1), line), parse_real(tok.substr(comma + 1, tok.size() - comma - 2), line)};
}

inline std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

inline std::vector<double> parse_reals(const std::string& s, std::size_t line) {
  std::vector<double> v;
  for (const auto& t : tokens(s)) v.push_back(parse_real(t, line));
  return v;
}

inline std::size_t parse_count(const std::string& s, std::size_t line) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, "expected a nonnegative integer, got '" + s + "'");
  return std::stoul(s);
}

/// Shortest decimal form that reads back to the same double.
inline std::string exact(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, r.ptr};
}

// A zero imaginary part of either sign is written as a plain real; the
// Hermitian constructor restores the mirrored signs on reading.
inline std::string exact(const cdouble& z) {
  if (z.imag() == 0.0) return exact(z.real());
  return "(" + exact(z.real()) + "," + exact(z.imag()) + ")";
}

inline int int_param(const GeneratorSpec& g, const std::string& key) {
  const auto it = g.params.find(key);
  if (it == g.params.end()) throw std::invalid_argument("generator " + g.name + " needs parameter '" + key + "'");
  return static_cast<int>(parse_count(it->second, 0));
}

inline SymTridiagonal generate(const GeneratorSpec& g) {
  auto expect_keys = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : g.params) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) throw std::invalid_argument("generator " + g.name + ": unknown parameter '" + k + "'");
    }
  };
  if (g.name == "wilkinson_plus") {
    expect_keys({"n"});
    return wilkinson_plus(int_param(g, "n"));
  }
  if (g.name == "wilkinson_split") {
    expect_keys({"n", "part"});
    const WilkinsonSplit s = wilkinson_split(int_param(g, "n"));
    const auto it = g.params.find("part");
    const std::string part = it == g.params.end() ? "A" : it->second;
    if (part == "A") return s.a;
    if (part == "E") return s.e;
    throw std::invalid_argument("wilkinson_split: part must be A or E");
  }
  if (g.name == "aed_example_1000") {
    expect_keys({});
    return aed_example_1000();
  }
  throw std::invalid_argument("unknown generator '" + g.name + "'");
}

}  // namespace detail

inline std::size_t MatrixFile::order() const {
  if (const auto* d = std::get_if<DenseHermitian>(&payload)) return d->order();
  if (const auto* t = std::get_if<SymTridiagonal>(&payload)) return t->order();
  return detail::generate(std::get<GeneratorSpec>(payload)).order();
}

inline DenseHermitian MatrixFile::dense() const {
  if (const auto* d = std::get_if<DenseHermitian>(&payload)) return *d;
  return tridiagonal().to_dense();
}

inline SymTridiagonal MatrixFile::tridiagonal() const {
  if (const auto* t = std::get_if<SymTridiagonal>(&payload)) return *t;
  if (const auto* g = std::get_if<GeneratorSpec>(&payload)) return detail::generate(*g);
  const DenseHermitian& d = std::get<DenseHermitian>(payload);
  const std::size_t n = d.order();
  std::vector<double> diag(n), off(n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const cdouble z = d(i, j);
      if (z.imag() != 0.0) throw std::invalid_argument("matrix is complex, not real tridiagonal");
      if (i == j) diag[i] = z.real();
      else if (i == j + 1) off[j] = z.real();
      else if (z.real() != 0.0) throw std::invalid_argument("matrix is not tridiagonal");
    }
  return {std::move(diag), std::move(off)};
}

inline MatrixFile parse_matrix(std::istream& in) {
  std::map<std::string, std::string> keys;
  std::vector<std::pair<std::size_t, std::string>> rows;
  std::map<std::string, std::size_t> key_line;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const std::string line = detail::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected key = value");
    const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, "missing key");
    if (key == "row") {
      rows.emplace_back(lineno, value);
      continue;
    }
    if (keys.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    keys[key] = value;
    key_line[key] = lineno;
  }
  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    const auto it = keys.find(key);
    if (it == keys.end()) return std::nullopt;
    auto out = std::make_pair(it->second, key_line[key]);
    keys.erase(it);
    return out;
  };

  const auto format = take("format");
  if (!format) throw ParseError(0, "missing 'format' line");
  MatrixFile m;
  if (const auto label = take("name")) m.label = label->first;

  if (format->first == "generator") {
    const auto gen = take("generator");
    if (!gen || gen->first.empty()) throw ParseError(format->second, "generator files need 'generator = <name>'");
    if (!rows.empty()) throw ParseError(rows.front().first, "row lines are only valid in dense-hermitian files");
    GeneratorSpec g{gen->first, {}};
    for (auto& [k, v] : keys) g.params[k] = v;
    try {
      detail::generate(g);
    } catch (const std::exception& e) {
      throw ParseError(gen->second, e.what());
    }
    m.payload = std::move(g);
    return m;
  }

  if (format->first == "tridiagonal") {
    const auto diag = take("diag");
    if (!diag) throw ParseError(0, "tridiagonal files need a 'diag' line");
    const auto off = take("offdiag");
    std::vector<double> d = detail::parse_reals(diag->first, diag->second);
    std::vector<double> e = off ? detail::parse_reals(off->first, off->second) : std::vector<double>{};
    if (d.empty()) throw ParseError(diag->second, "diag is empty");
    if (e.size() + 1 != d.size())
      throw ParseError(off ? off->second : diag->second, "offdiag must have " + std::to_string(d.size() - 1) + " entries");
    if (const auto n = take("n"); n && detail::parse_count(n->first, n->second) != d.size())
      throw ParseError(n->second, "n disagrees with the length of diag");
    if (!rows.empty()) throw ParseError(rows.front().first, "row lines are only valid in dense-hermitian files");
    if (!keys.empty()) throw ParseError(key_line[keys.begin()->first], "unknown key '" + keys.begin()->first + "'");
    m.payload = SymTridiagonal(std::move(d), std::move(e));
    return m;
  }

  if (format->first == "dense-hermitian") {
    const auto nline = take("n");
    if (!nline) throw ParseError(0, "dense-hermitian files need an 'n' line");
    const std::size_t n = detail::parse_count(nline->first, nline->second);
    if (n == 0) throw ParseError(nline->second, "n must be positive");
    if (!keys.empty()) throw ParseError(key_line[keys.begin()->first], "unknown key '" + keys.begin()->first + "'");
    if (rows.size() != n)
      throw ParseError(rows.empty() ? nline->second : rows.back().first,
                       "expected " + std::to_string(n) + " row lines, found " + std::to_string(rows.size()));
    CMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto toks = detail::tokens(rows[i].second);
      if (toks.size() != n) throw ParseError(rows[i].first, "row needs " + std::to_string(n) + " entries");
      for (std::size_t j = 0; j < n; ++j) c(i, j) = detail::parse_entry(toks[j], rows[i].first);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (c(i, i).imag() != 0.0) throw ParseError(rows[i].first, "diagonal entries must be real");
      for (std::size_t j = 0; j < i; ++j)
        if (c(j, i) != std::conj(c(i, j)))
          throw ParseError(rows[j].first, "matrix is not Hermitian at (" + std::to_string(j + 1) + "," +
                                              std::to_string(i + 1) + ")");
    }
    m.payload = DenseHermitian(std::move(c));
    return m;
  }
  throw ParseError(format->second, "unknown format '" + format->first + "'");
}

inline MatrixFile parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix(in);
}

inline MatrixFile load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file '" + path + "'");
  try {
    return parse_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path);
  }
}

inline std::string serialize(const MatrixFile& m) {
  std::ostringstream out;
  out << "format = " << to_string(m.format()) << "\n";
  if (!m.label.empty()) out << "name = " << m.label << "\n";
  if (const auto* g = std::get_if<GeneratorSpec>(&m.payload)) {
    out << "generator = " << g->name << "\n";
    for (const auto& [k, v] : g->params) out << k << " = " << v << "\n";
  } else if (const auto* t = std::get_if<SymTridiagonal>(&m.payload)) {
    out << "n = " << t->order() << "\ndiag =";
    for (double x : t->diag()) out << ' ' << detail::exact(x);
    out << "\noffdiag =";
    for (double x : t->offdiag()) out << ' ' << detail::exact(x);
    out << "\n";
  } else {
    const DenseHermitian& d = std::get<DenseHermitian>(m.payload);
    out << "n = " << d.order() << "\n";
    for (std::size_t i = 0; i < d.order(); ++i) {
      out << "row =";
      for (std::size_t j = 0; j < d.order(); ++j) out << ' ' << detail::exact(d(i, j));
      out << "\n";
    }
  }
  return out.str();
}

inline void save_matrix(const std::string& path, const MatrixFile& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write matrix file '" + path + "'");
  out << serialize(m);
}

}  // namespace eigbound
