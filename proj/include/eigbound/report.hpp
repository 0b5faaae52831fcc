#pragma once

// Run reports: one record per line as `key=value` pairs, a summary line and
// a verdict. Field order is insertion order, so output is byte-stable.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eigbound/log_scalar.hpp"

namespace eigbound {

namespace fmt {

// Sentinels keep non-finite values out of the output.
inline constexpr const char* pos_unbounded = "+unbounded";
inline constexpr const char* neg_unbounded = "-unbounded";
inline constexpr const char* undefined = "undefined";
inline constexpr const char* underflow = "underflow";

inline std::string num(double x) {
  if (std::isnan(x)) return undefined;
  if (std::isinf(x)) return x > 0 ? pos_unbounded : neg_unbounded;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

/// Full precision, for values compared downstream.
inline std::string exact(double x) {
  if (!std::isfinite(x)) return num(x);
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, r.ptr};
}

inline std::string count(std::size_t n) { return std::to_string(n); }
inline std::string flag(bool b) { return b ? "true" : "false"; }

/// log10 |x| with the zero and infinite cases spelled out.
inline std::string log10_of(const LogScalar& s) {
  if (s.is_zero()) return neg_unbounded;
  if (s.is_infinite()) return pos_unbounded;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s.log10_magnitude());
  return buf;
}

inline std::string value_of(const LogScalar& s) {
  if (s.is_infinite()) return s.sign() > 0 ? pos_unbounded : neg_unbounded;
  if (!s.representable()) return underflow;
  return num(s.to_double());
}

}  // namespace fmt

struct Record {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  explicit Record(std::string k) : kind(std::move(k)) {}

  Record& set(std::string key, std::string value) {
    for (auto& [k, v] : fields)
      if (k == key) {
        v = std::move(value);
        return *this;
      }
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  Record& set(std::string key, const char* value) { return set(std::move(key), std::string(value)); }
  Record& set(std::string key, double value) { return set(std::move(key), fmt::num(value)); }
  Record& set(std::string key, std::size_t value) { return set(std::move(key), fmt::count(value)); }
  Record& set(std::string key, int value) { return set(std::move(key), std::to_string(value)); }
  Record& set(std::string key, bool value) { return set(std::move(key), fmt::flag(value)); }

  /// sign, log10 magnitude and plain value of a bound.
  Record& set_bound(const LogScalar& b, const std::string& prefix = "bound") {
    set(prefix + "_sign", b.sign());
    set(prefix + "_log10", fmt::log10_of(b));
    return set(prefix, fmt::value_of(b));
  }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return v;
    return std::nullopt;
  }
};

/// Outcome of one embedded expectation or oracle comparison.
struct Check {
  std::string name;
  bool pass = false;
  std::string observed;
  std::string expected;
  std::string margin;  ///< distance to failure, in the check's own units
};

class RunReport {
 public:
  explicit RunReport(std::string command) : command_(std::move(command)) {}

  const std::string& command() const { return command_; }
  const std::vector<Record>& records() const { return records_; }
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::string>& violations() const { return violations_; }

  Record& add(std::string kind) { return records_.emplace_back(std::move(kind)); }
  void add(Record r) { records_.push_back(std::move(r)); }

  void note(std::string key, std::string value) { summary_.emplace_back(std::move(key), std::move(value)); }

  /// A failed verification; its text names the offending record.
  void violation(std::string what) { violations_.push_back(std::move(what)); }

  void check(Check c) {
    if (!c.pass) violation("check " + c.name);
    checks_.push_back(std::move(c));
  }

  std::size_t count(const std::string& kind) const {
    std::size_t n = 0;
    for (const auto& r : records_) n += r.kind == kind;
    return n;
  }

  bool sound() const { return violations_.empty(); }
  int exit_code() const { return sound() ? 0 : 1; }

  void write_text(std::ostream& out) const {
    out << "command=" << command_ << "\n";
    for (const auto& r : records_) {
      out << "record=" << r.kind;
      for (const auto& [k, v] : r.fields) out << ' ' << k << '=' << v;
      out << "\n";
    }
    for (const auto& c : checks_)
      out << (c.pass ? "PASS " : "FAIL ") << c.name << " observed=" << c.observed << " expected=" << c.expected
          << " margin=" << c.margin << "\n";
    out << "summary records=" << records_.size();
    for (const auto& [k, v] : summary_) out << ' ' << k << '=' << v;
    out << " checks=" << checks_.size() << " violations=" << violations_.size() << "\n";
    for (const auto& v : violations_) out << "violation=" << v << "\n";
    out << "verdict=" << (sound() ? "sound" : "unsound") << "\n";
  }

  std::string text() const {
    std::ostringstream s;
    write_text(s);
    return s.str();
  }

  /// One row per record; columns are the union of keys in first-seen order.
  void write_csv(std::ostream& out) const {
    std::vector<std::string> cols{"kind"};
    for (const auto& r : records_)
      for (const auto& [k, v] : r.fields)
        if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& r : records_) {
      out << r.kind;
      for (std::size_t i = 1; i < cols.size(); ++i) out << ',' << r.get(cols[i]).value_or("");
      out << "\n";
    }
  }

 private:
  std::string command_;
  std::vector<Record> records_;
  std::vector<std::pair<std::string, std::string>> summary_;
  std::vector<Check> checks_;
  std::vector<std::string> violations_;
};

}  // namespace eigbound
