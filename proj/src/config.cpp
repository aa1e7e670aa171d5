#include "nlt/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlt::config {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char c : key) {
    const bool ok = std::islower(static_cast<unsigned char>(c)) ||
                    std::isdigit(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

void Config::fail(const std::string& message) const {
  throw std::runtime_error(origin_ + ": " + message);
}

void Config::fail_at(int line, const std::string& message) const {
  throw std::runtime_error(origin_ + ":" + std::to_string(line) + ": " + message);
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) cfg.fail_at(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!valid_key(key))
      cfg.fail_at(line, "invalid key '" + key + "' (lowercase words joined by '.' expected)");
    if (value.empty()) cfg.fail_at(line, "key '" + key + "' has an empty value");
    const auto [it, inserted] = cfg.entries_.emplace(key, Entry{value, line, false});
    if (!inserted)
      cfg.fail_at(line, "duplicate key '" + key + "' (first set on line " +
                            std::to_string(it->second.line) + ")");
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

int Config::line_of(const std::string& key) const { return demand(key).line; }

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  it->second.used = true;
  return &it->second;
}

const Config::Entry& Config::demand(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) fail("missing required key '" + key + "'");
  return *e;
}

std::string Config::get_string(const std::string& key) const { return demand(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double Config::get_double(const std::string& key) const {
  const Entry& e = demand(key);
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0')
    fail_at(e.line, "value of '" + key + "' is not a number: '" + e.value + "'");
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
  const Entry& e = demand(key);
  char* end = nullptr;
  const long v = std::strtol(e.value.c_str(), &end, 10);
  if (end == e.value.c_str() || *end != '\0')
    fail_at(e.line, "value of '" + key + "' is not an integer: '" + e.value + "'");
  return v;
}

long Config::get_int(const std::string& key, long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  const std::string& v = e->value;
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  fail_at(e->line, "value of '" + key + "' must be on/off, got '" + v + "'");
}

std::string Config::get_enum(const std::string& key,
                             const std::vector<std::string>& allowed) const {
  const Entry& e = demand(key);
  for (const auto& a : allowed)
    if (e.value == a) return e.value;
  fail_at(e.line, "value of '" + key + "' must be one of {" + join(allowed, ", ") + "}, got '" +
                      e.value + "'");
}

std::string Config::get_enum(const std::string& key, const std::vector<std::string>& allowed,
                             const std::string& fallback) const {
  return has(key) ? get_enum(key, allowed) : fallback;
}

void Config::require(const std::vector<std::string>& keys) const {
  std::vector<std::string> missing;
  for (const auto& k : keys) {
    if (has(k))
      find(k);
    else
      missing.push_back(k);
  }
  if (!missing.empty()) fail("missing required keys: " + join(missing, ", "));
}

void Config::reject_unknown() const {
  std::vector<std::string> unknown;
  for (const auto& [key, entry] : entries_)
    if (!entry.used) unknown.push_back(key + " (line " + std::to_string(entry.line) + ")");
  if (!unknown.empty()) fail("unknown keys: " + join(unknown, ", "));
}

std::map<std::string, std::string> Config::echo() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, entry] : entries_) out.emplace(key, entry.value);
  return out;
}

}  // namespace nlt::config
