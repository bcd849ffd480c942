#ifndef PERJET_CHART_IO_HPP
#define PERJET_CHART_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "connection.hpp"
#include "expr.hpp"
#include "mazur.hpp"

namespace perjet {

/// Raw key/value view of a chart file. Sections are [name] headers; the
/// repeatable [[flat_tensor]] section appends one instance per header. Values
/// are quoted strings, integers, arrays, or nested integer arrays.
struct ChartFileValue {
  enum class Kind { String, Integer, StringArray, IntegerArray, IntegerMatrix } kind;
  std::string str;
  long long integer = 0;
  std::vector<std::string> strings;
  std::vector<long long> integers;
  std::vector<std::vector<long long>> matrix;
  unsigned line = 0;
};

struct ChartFileSection {
  std::string name;
  unsigned line = 0;
  std::map<std::string, ChartFileValue> values;
};

struct ChartFile {
  std::vector<ChartFileSection> sections;

  const ChartFileSection* find(const std::string& name) const {
    for (const auto& s : sections)
      if (s.name == name) return &s;
    return nullptr;
  }
  std::vector<const ChartFileSection*> find_all(const std::string& name) const {
    std::vector<const ChartFileSection*> out;
    for (const auto& s : sections)
      if (s.name == name) out.push_back(&s);
    return out;
  }
};

namespace detail_io {

[[noreturn]] inline void parse_fail(unsigned line, const std::string& what) {
  fail(Errc::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline ChartFileValue parse_value(const std::string& raw, unsigned line) {
  ChartFileValue v;
  v.line = line;
  std::string s = strip(raw);
  if (s.empty()) parse_fail(line, "empty value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') parse_fail(line, "unterminated string");
    v.kind = ChartFileValue::Kind::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') parse_fail(line, "unterminated array");
    std::string body = strip(s.substr(1, s.size() - 2));
    if (!body.empty() && body.front() == '[') {
      // matrix: [[..],[..]]
      v.kind = ChartFileValue::Kind::IntegerMatrix;
      std::size_t pos = 0;
      while (pos < body.size()) {
        if (body[pos] != '[') parse_fail(line, "expected '[' in matrix row");
        std::size_t close = body.find(']', pos);
        if (close == std::string::npos) parse_fail(line, "unterminated matrix row");
        std::string rowtxt = body.substr(pos + 1, close - pos - 1);
        std::vector<long long> row;
        std::stringstream ss(rowtxt);
        std::string item;
        while (std::getline(ss, item, ',')) {
          item = strip(item);
          if (item.empty()) parse_fail(line, "empty matrix entry");
          try {
            row.push_back(std::stoll(item));
          } catch (...) {
            parse_fail(line, "bad integer '" + item + "'");
          }
        }
        v.matrix.push_back(std::move(row));
        pos = close + 1;
        while (pos < body.size() && (body[pos] == ',' || body[pos] == ' ' || body[pos] == '\t')) ++pos;
      }
      return v;
    }
    // flat array: strings or integers
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    for (char c : body) {
      if (c == '"') in_str = !in_str;
      if (c == ',' && !in_str) {
        items.push_back(strip(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!strip(cur).empty() || !items.empty()) items.push_back(strip(cur));
    bool all_str = !items.empty();
    for (const auto& it : items)
      if (it.empty() || it.front() != '"') all_str = false;
    if (all_str) {
      v.kind = ChartFileValue::Kind::StringArray;
      for (auto& it : items) {
        if (it.size() < 2 || it.back() != '"') parse_fail(line, "unterminated string in array");
        v.strings.push_back(it.substr(1, it.size() - 2));
      }
      return v;
    }
    v.kind = ChartFileValue::Kind::IntegerArray;
    for (const auto& it : items) {
      if (it.empty()) parse_fail(line, "empty array entry");
      try {
        v.integers.push_back(std::stoll(it));
      } catch (...) {
        parse_fail(line, "bad integer '" + it + "'");
      }
    }
    return v;
  }
  v.kind = ChartFileValue::Kind::Integer;
  try {
    std::size_t used = 0;
    v.integer = std::stoll(s, &used);
    if (used != s.size()) parse_fail(line, "bad integer '" + s + "'");
  } catch (const Error&) {
    throw;
  } catch (...) {
    parse_fail(line, "bad value '" + s + "'");
  }
  return v;
}

} // namespace detail_io

inline ChartFile parse_chart_text(const std::string& text) {
  using detail_io::parse_fail;
  using detail_io::strip;
  ChartFile out;
  std::stringstream ss(text);
  std::string rawline;
  unsigned lineno = 0;
  ChartFileSection* current = nullptr;
  while (std::getline(ss, rawline)) {
    ++lineno;
    // comments start with '#' outside quotes
    std::string line;
    bool in_str = false;
    for (char c : rawline) {
      if (c == '"') in_str = !in_str;
      if (c == '#' && !in_str) break;
      line += c;
    }
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      bool repeat = line.size() > 1 && line[1] == '[';
      std::string name = line;
      std::string closer = repeat ? "]]" : "]";
      if (name.size() < 2 + closer.size() || name.substr(name.size() - closer.size()) != closer)
        parse_fail(lineno, "malformed section header '" + line + "'");
      name = name.substr(repeat ? 2 : 1, name.size() - 2 * (repeat ? 2 : 1));
      name = strip(name);
      if (name.empty()) parse_fail(lineno, "empty section name");
      if (!repeat)
        for (const auto& s : out.sections)
          if (s.name == name) parse_fail(lineno, "duplicate section [" + name + "]");
      out.sections.push_back(ChartFileSection{name, lineno, {}});
      current = &out.sections.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(lineno, "expected 'key = value'");
    if (!current) parse_fail(lineno, "key outside of any section");
    std::string key = strip(line.substr(0, eq));
    if (key.empty()) parse_fail(lineno, "empty key");
    if (current->values.count(key)) parse_fail(lineno, "duplicate key '" + key + "' in [" + current->name + "]");
    current->values[key] = detail_io::parse_value(line.substr(eq + 1), lineno);
  }
  return out;
}

inline ChartFile parse_chart_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_chart_text(buf.str());
}

namespace detail_io {

inline const ChartFileValue& require(const ChartFileSection& s, const std::string& key,
                                     ChartFileValue::Kind kind, const char* kind_name) {
  auto it = s.values.find(key);
  if (it == s.values.end()) parse_fail(s.line, "missing key '" + key + "' in [" + s.name + "]");
  if (it->second.kind != kind)
    parse_fail(it->second.line, "key '" + key + "' must be " + std::string(kind_name));
  return it->second;
}

} // namespace detail_io

/// Field descriptor from [field].
inline CoefficientField chart_field(const ChartFile& file) {
  const auto* sec = file.find("field");
  if (!sec) fail(Errc::ParseError, "missing [field] section");
  const auto& kind = detail_io::require(*sec, "kind", ChartFileValue::Kind::String, "a string");
  if (kind.str == "rationals") return CoefficientField::rationals();
  if (kind.str == "prime_field") {
    const auto& p = detail_io::require(*sec, "p", ChartFileValue::Kind::Integer, "an integer");
    if (p.integer < 2) detail_io::parse_fail(p.line, "p must be a prime >= 2");
    return CoefficientField::prime(static_cast<std::uint64_t>(p.integer));
  }
  detail_io::parse_fail(kind.line, "kind must be \"rationals\" or \"prime_field\"");
}

template <class K>
K chart_scalar(long long value, const CoefficientField& field);

template <>
inline Rat chart_scalar<Rat>(long long value, const CoefficientField&) {
  return Rat(static_cast<long>(value));
}

template <>
inline Fp chart_scalar<Fp>(long long value, const CoefficientField& field) {
  return Fp(value, field.p);
}

/// Typed chart from a parsed file; K must match the declared field.
template <class K>
ConnectionChart<K> load_chart(const ChartFile& file) {
  using detail_io::parse_fail;
  using detail_io::require;
  CoefficientField field = chart_field(file);

  const auto* chart_sec = file.find("chart");
  if (!chart_sec) fail(Errc::ParseError, "missing [chart] section");
  const auto& coords = require(*chart_sec, "coordinates", ChartFileValue::Kind::StringArray, "a string array");
  const auto& rank = require(*chart_sec, "rank", ChartFileValue::Kind::Integer, "an integer");
  const auto& weight = require(*chart_sec, "weight", ChartFileValue::Kind::Integer, "an integer");
  const auto& hodge = require(*chart_sec, "hodge_numbers", ChartFileValue::Kind::IntegerArray, "an integer array");
  if (rank.integer < 1) parse_fail(rank.line, "rank must be positive");
  if (weight.integer < 0) parse_fail(weight.line, "weight must be non-negative");
  std::vector<unsigned> h;
  for (long long x : hodge.integers) {
    if (x < 0) parse_fail(hodge.line, "Hodge numbers must be non-negative");
    h.push_back(static_cast<unsigned>(x));
  }
  FlagShape shape;
  try {
    shape = FlagShape(static_cast<unsigned>(rank.integer), static_cast<int>(weight.integer), h);
  } catch (const Error& e) {
    parse_fail(hodge.line, std::string("in 'hodge_numbers': ") + e.what());
  }

  auto chart = ConnectionChart<K>::zero(field, coords.strings, shape);
  unsigned n = chart.n(), m = chart.m();

  if (const auto* conn = file.find("connection")) {
    for (const auto& [key, value] : conn->values) {
      // keys c.i.j.l with 1-based indices
      unsigned idx[3];
      if (key.size() < 2 || key[0] != 'c' || key[1] != '.') parse_fail(value.line, "connection keys look like c.i.j.l");
      std::string rest = key.substr(2);
      std::stringstream ks(rest);
      std::string part;
      int got = 0;
      while (std::getline(ks, part, '.')) {
        if (got >= 3) parse_fail(value.line, "connection key '" + key + "' has too many indices");
        try {
          idx[got++] = static_cast<unsigned>(std::stoul(part));
        } catch (...) {
          parse_fail(value.line, "bad index in connection key '" + key + "'");
        }
      }
      if (got != 3) parse_fail(value.line, "connection key '" + key + "' needs three indices");
      if (idx[0] < 1 || idx[0] > m || idx[1] < 1 || idx[1] > m)
        parse_fail(value.line, "connection entry index out of range in '" + key + "'");
      if (idx[2] < 1 || idx[2] > n) parse_fail(value.line, "coordinate index out of range in '" + key + "'");
      if (value.kind != ChartFileValue::Kind::String) parse_fail(value.line, "connection entries are strings");
      try {
        chart.connection[idx[2] - 1](idx[0] - 1, idx[1] - 1) =
            parse_rational_function<K>(value.str, chart.coordinates, field);
      } catch (const Error& e) {
        parse_fail(value.line, std::string("in '") + key + "': " + e.what());
      }
    }
  }

  if (const auto* pol = file.find("polarization")) {
    const auto& rows = require(*pol, "rows", ChartFileValue::Kind::IntegerMatrix, "an integer matrix");
    if (rows.matrix.size() != m) parse_fail(rows.line, "polarization must have one row per rank");
    Matrix<K> q(m, m, ScalarOps<K>::zero());
    for (unsigned i = 0; i < m; ++i) {
      if (rows.matrix[i].size() != m) parse_fail(rows.line, "polarization rows must have rank entries");
      for (unsigned j = 0; j < m; ++j) q(i, j) = chart_scalar<K>(rows.matrix[i][j], field);
    }
    chart.polarization = q;
  }

  for (const auto* ft : file.find_all("flat_tensor")) {
    const auto& a = require(*ft, "a", ChartFileValue::Kind::Integer, "an integer");
    const auto& b = require(*ft, "b", ChartFileValue::Kind::Integer, "an integer");
    const auto& cs = require(*ft, "coefficients", ChartFileValue::Kind::StringArray, "a string array");
    if (a.integer < 0 || b.integer < 0) parse_fail(a.line, "tensor index must be non-negative");
    TensorIndex idx{static_cast<unsigned>(a.integer), static_cast<unsigned>(b.integer)};
    if (cs.strings.size() != idx.ambient_dim(m))
      parse_fail(cs.line, "flat tensor needs rank^(a+b) = " + std::to_string(idx.ambient_dim(m)) + " coefficients");
    Tensor<RationalFunction<K>> t(idx, m, RationalFunction<K>(n));
    for (std::size_t k = 0; k < cs.strings.size(); ++k) {
      try {
        t.data()[k] = parse_rational_function<K>(cs.strings[k], chart.coordinates, field);
      } catch (const Error& e) {
        parse_fail(cs.line, std::string("in flat tensor coefficient: ") + e.what());
      }
    }
    chart.flat_tensors.emplace_back(idx, std::move(t));
  }

  chart.validate();
  return chart;
}

/// Frobenius module from [frobenius], using the chart's rank/weight and its
/// Hodge numbers as the expected shape.
inline std::optional<FrobeniusModule> load_frobenius(const ChartFile& file) {
  using detail_io::parse_fail;
  using detail_io::require;
  const auto* sec = file.find("frobenius");
  if (!sec) return std::nullopt;

  const auto* chart_sec = file.find("chart");
  if (!chart_sec) fail(Errc::ParseError, "missing [chart] section");
  const auto& rank = require(*chart_sec, "rank", ChartFileValue::Kind::Integer, "an integer");
  const auto& weight = require(*chart_sec, "weight", ChartFileValue::Kind::Integer, "an integer");
  const auto& hodge = require(*chart_sec, "hodge_numbers", ChartFileValue::Kind::IntegerArray, "an integer array");

  FrobeniusModule mod;
  const auto& p = require(*sec, "p", ChartFileValue::Kind::Integer, "an integer");
  const auto& prec = require(*sec, "precision", ChartFileValue::Kind::Integer, "an integer");
  const auto& rows = require(*sec, "rows", ChartFileValue::Kind::IntegerMatrix, "an integer matrix");
  if (p.integer < 2) parse_fail(p.line, "p must be a prime >= 2");
  if (prec.integer < 1) parse_fail(prec.line, "precision must be positive");
  mod.p = static_cast<std::uint64_t>(p.integer);
  mod.precision = static_cast<unsigned>(prec.integer);
  mod.rank = static_cast<unsigned>(rank.integer);
  mod.weight = static_cast<int>(weight.integer);
  std::vector<unsigned> h;
  for (long long x : hodge.integers) h.push_back(static_cast<unsigned>(x));
  mod.expected_shape = FlagShape(mod.rank, mod.weight, h);
  if (rows.matrix.size() != mod.rank) parse_fail(rows.line, "frobenius must have one row per rank");
  mod.frobenius = Matrix<Int>(mod.rank, mod.rank, Int(0));
  for (unsigned i = 0; i < mod.rank; ++i) {
    if (rows.matrix[i].size() != mod.rank) parse_fail(rows.line, "frobenius rows must have rank entries");
    for (unsigned j = 0; j < mod.rank; ++j) mod.frobenius(i, j) = Int(static_cast<long>(rows.matrix[i][j]));
  }
  return mod;
}

} // namespace perjet

#endif
