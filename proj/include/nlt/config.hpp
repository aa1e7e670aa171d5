#ifndef NLT_CONFIG_HPP
#define NLT_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace nlt::config {

// Line-oriented `key = value` scenario format: one assignment per line, `#`
// starts a comment, keys are dotted lowercase words, duplicates are errors.
// Every diagnostic carries the origin name and a line number.  Typed getters
// mark keys as consumed so reject_unknown() can list leftovers: the schema
// accepts a key by reading it, nothing else.
class Config {
public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin);

  const std::string& origin() const { return origin_; }
  bool has(const std::string& key) const;
  int line_of(const std::string& key) const;

  // Required getters throw when the key is absent or malformed.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;

  // Defaulted getters consume the key when present.
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Value must be one of `allowed`; the error message lists the choices.
  std::string get_enum(const std::string& key, const std::vector<std::string>& allowed) const;
  std::string get_enum(const std::string& key, const std::vector<std::string>& allowed,
                       const std::string& fallback) const;

  // Throws listing every missing key at once (the empty-config diagnostic).
  void require(const std::vector<std::string>& keys) const;
  // Throws listing every key no getter consumed, with line numbers.
  void reject_unknown() const;

  // Full key -> value copy for report echoes.
  std::map<std::string, std::string> echo() const;

private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool used = false;
  };

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(int line, const std::string& message) const;
  const Entry* find(const std::string& key) const;
  const Entry& demand(const std::string& key) const;

  std::string origin_;
  std::map<std::string, Entry> entries_;
};

}  // namespace nlt::config

#endif
