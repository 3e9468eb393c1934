#include "rlab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rlab/csv.hpp"

namespace rlab {

namespace {
std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

std::string KeyValueFile::read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  return parse_string(read_text(path), path);
}

KeyValueFile KeyValueFile::parse_string(const std::string& text, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected `key = value`");
    }
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (kv.values_.count(key)) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key `" + key + "`");
    }
    kv.entries_.emplace_back(key, value);
    kv.values_[key] = {value, line_no};
  }
  return kv;
}

bool KeyValueFile::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& KeyValueFile::lookup(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError(origin_ + ": missing required key `" + key + "`");
  }
  return it->second.first;
}

std::string KeyValueFile::get_string(const std::string& key) const { return lookup(key); }

std::string KeyValueFile::get_string_or(const std::string& key,
                                        const std::string& fallback) const {
  return has(key) ? lookup(key) : fallback;
}

namespace {
double parse_double(const std::string& origin, const std::string& key, const std::string& v) {
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError(origin + ": key `" + key + "`: not a number: `" + v + "`");
  }
  return d;
}
}  // namespace

double KeyValueFile::get_double(const std::string& key) const {
  return parse_double(origin_, key, lookup(key));
}

double KeyValueFile::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueFile::get_int(const std::string& key) const {
  double d = get_double(key);
  int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw ConfigError(origin_ + ": key `" + key + "`: expected an integer");
  }
  return i;
}

int KeyValueFile::get_int_or(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

long KeyValueFile::get_long_or(const std::string& key, long fallback) const {
  if (!has(key)) return fallback;
  return static_cast<long>(get_double(key));
}

std::uint64_t KeyValueFile::get_u64_or(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = lookup(key);
  char* end = nullptr;
  std::uint64_t u = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0') {
    throw ConfigError(origin_ + ": key `" + key + "`: not an unsigned integer: `" + v + "`");
  }
  return u;
}

bool KeyValueFile::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = lookup(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(origin_ + ": key `" + key + "`: expected a boolean, got `" + v + "`");
}

std::vector<double> KeyValueFile::get_double_list(const std::string& key) const {
  const std::string& v = lookup(key);
  std::vector<double> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(origin_, key, item));
  }
  return out;
}

void KeyValueFile::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(origin_ + ":" + std::to_string(values_.at(key).second) +
                        ": unknown key `" + key + "`");
    }
  }
}

void ConfigWriter::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void ConfigWriter::set(const std::string& key, double value) { set(key, csv_double(value)); }
void ConfigWriter::set(const std::string& key, int value) { set(key, std::to_string(value)); }
void ConfigWriter::set(const std::string& key, long value) { set(key, std::to_string(value)); }
void ConfigWriter::set(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}
void ConfigWriter::set(const std::string& key, bool value) {
  set(key, value ? std::string("true") : std::string("false"));
}

std::string ConfigWriter::serialize() const {
  std::ostringstream out;
  for (const auto& [key, value] : entries_) out << key << " = " << value << "\n";
  return out.str();
}

void ConfigWriter::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize();
}

}  // namespace rlab
