#ifndef NEGOTIATION_CONFIG_HPP_
#define NEGOTIATION_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace negotiation {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// INI-style experiment config: `[section]` headers, `key = value` pairs,
// `#`/`;` comments. Keys address as "section.key" ("key" before any
// section). Reads are tracked so callers can reject unknown fields: after
// consuming every key it understands, a loader calls require_consumed(),
// which throws a line-numbered ConfigError listing anything left over.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<config>");

  bool has(const std::string& key) const;

  // Missing key without a default, or an unparsable value, throws
  // ConfigError naming the key (and line where applicable).
  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& def);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double def);
  int get_int(const std::string& key);
  int get_int(const std::string& key, int def);
  std::uint64_t get_u64(const std::string& key, std::uint64_t def);
  bool get_bool(const std::string& key, bool def);

  void require_consumed() const;
  std::vector<std::string> unconsumed() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  const Entry* find(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;

  std::string origin_;
  std::map<std::string, Entry> entries_;
  mutable std::set<std::string> consumed_;
};

// Accumulates resolved settings in insertion order and renders them in the
// same INI dialect, grouping "section.key" entries under their section.
// Every run directory gets one of these snapshots next to its outputs.
class ResolvedConfig {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value);
  void set(const std::string& key, double value);
  void set(const std::string& key, int value);
  void set(const std::string& key, std::uint64_t value);
  void set(const std::string& key, bool value);

  std::string str() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace negotiation

#endif  // NEGOTIATION_CONFIG_HPP_
