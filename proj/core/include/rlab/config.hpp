#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rlab {

/// Raised for malformed or incomplete configuration; the CLI maps it to
/// exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Line-oriented `key = value` file with `#` comments. Getters throw
/// ConfigError naming the missing key; numeric getters name the offending
/// line on parse failure.
class KeyValueFile {
 public:
  static KeyValueFile parse_string(const std::string& text, const std::string& origin);
  static KeyValueFile parse_file(const std::string& path);
  static std::string read_text(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int_or(const std::string& key, int fallback) const;
  long get_long_or(const std::string& key, long fallback) const;
  std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  /// Comma-separated doubles; an empty value yields an empty list.
  std::vector<double> get_double_list(const std::string& key) const;

  /// Rejects keys outside the allowed set, reporting the line number.
  void require_known(const std::vector<std::string>& allowed) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::string origin_;
  std::vector<std::pair<std::string, std::string>> entries_;  // insertion order
  std::map<std::string, std::pair<std::string, int>> values_; // key -> (value, line)

  const std::string& lookup(const std::string& key) const;
};

/// Ordered writer for resolved-config snapshots.
class ConfigWriter {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  void set(const std::string& key, long value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, bool value);

  std::string serialize() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace rlab
