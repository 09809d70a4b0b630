#include "negotiation/config.hpp"

#include <cctype>
#include <climits>
#include <fstream>
#include <sstream>

#include "negotiation/csv.hpp"

namespace negotiation {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) +
                          ": empty section name");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full))
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": duplicate key '" + full + "'");
    cfg.entries_[full] = {value, lineno};
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const Config::Entry* Config::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  consumed_.insert(key);
  return &it->second;
}

void Config::fail(const std::string& key, const std::string& msg) const {
  auto it = entries_.find(key);
  if (it != entries_.end())
    throw ConfigError(origin_ + ":" + std::to_string(it->second.line) + ": " +
                      msg + " for key '" + key + "'");
  throw ConfigError(origin_ + ": " + msg + " for key '" + key + "'");
}

std::string Config::get_string(const std::string& key) {
  const Entry* e = find(key);
  if (!e) fail(key, "missing required key");
  return e->value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& def) {
  const Entry* e = find(key);
  return e ? e->value : def;
}

double Config::get_double(const std::string& key) {
  const Entry* e = find(key);
  if (!e) fail(key, "missing required key");
  try {
    std::size_t pos = 0;
    const double v = std::stod(e->value, &pos);
    if (pos != e->value.size()) fail(key, "trailing characters in number");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(key, "expected a number, got '" + e->value + "'");
  }
}

double Config::get_double(const std::string& key, double def) {
  return has(key) ? get_double(key) : def;
}

int Config::get_int(const std::string& key) {
  const Entry* e = find(key);
  if (!e) fail(key, "missing required key");
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(e->value, &pos);
    if (pos != e->value.size()) fail(key, "trailing characters in integer");
    if (v < INT_MIN || v > INT_MAX) fail(key, "integer out of range");
    return static_cast<int>(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(key, "expected an integer, got '" + e->value + "'");
  }
}

int Config::get_int(const std::string& key, int def) {
  return has(key) ? get_int(key) : def;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t def) {
  const Entry* e = find(key);
  if (!e) return def;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(e->value, &pos);
    if (pos != e->value.size()) fail(key, "trailing characters in integer");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    fail(key, "expected an unsigned integer, got '" + e->value + "'");
  }
}

bool Config::get_bool(const std::string& key, bool def) {
  const Entry* e = find(key);
  if (!e) return def;
  const std::string& v = e->value;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(key, "expected a boolean, got '" + v + "'");
}

void Config::require_consumed() const {
  const std::vector<std::string> extra = unconsumed();
  if (extra.empty()) return;
  std::string msg = "unknown field";
  if (extra.size() > 1) msg += "s";
  msg += ":";
  for (const std::string& k : extra) {
    const Entry& e = entries_.at(k);
    msg += " '" + k + "' (" + origin_ + ":" + std::to_string(e.line) + ")";
  }
  throw ConfigError(msg);
}

std::vector<std::string> Config::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [k, e] : entries_)
    if (!consumed_.count(k)) out.push_back(k);
  return out;
}

void ResolvedConfig::set(const std::string& key, const std::string& value) {
  items_.emplace_back(key, value);
}

void ResolvedConfig::set(const std::string& key, const char* value) {
  items_.emplace_back(key, std::string(value));
}

void ResolvedConfig::set(const std::string& key, double value) {
  items_.emplace_back(key, csv_double(value));
}

void ResolvedConfig::set(const std::string& key, int value) {
  items_.emplace_back(key, std::to_string(value));
}

void ResolvedConfig::set(const std::string& key, std::uint64_t value) {
  items_.emplace_back(key, std::to_string(value));
}

void ResolvedConfig::set(const std::string& key, bool value) {
  items_.emplace_back(key, value ? "true" : "false");
}

std::string ResolvedConfig::str() const {
  std::string out;
  std::string section;
  bool first = true;
  for (const auto& [key, value] : items_) {
    const std::size_t dot = key.find('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section || first) {
      if (!first) out += "\n";
      if (!sec.empty()) out += "[" + sec + "]\n";
      section = sec;
      first = false;
    }
    out += name + " = " + value + "\n";
  }
  return out;
}

void ResolvedConfig::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write config snapshot: " + path);
  os << str();
}

}  // namespace negotiation
