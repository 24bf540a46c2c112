#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dpsim/types.hpp"

namespace dpsim {

// Flat key = value configuration file. Lines are `key = tokens...`, with
// `#` comments and blank lines ignored. Values are whitespace-separated
// tokens; typed getters convert and report the offending key on failure.
class KeyValueFile {
 public:
  static KeyValueFile parse(const std::string& text, const std::string& origin = "<string>");
  static KeyValueFile load(const std::string& path);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_vector(const std::string& key, std::size_t expected) const;
  std::vector<double> get_vector(const std::string& key, std::size_t expected,
                                 const std::vector<double>& fallback) const;

  // Raw whitespace-separated value tokens for mixed-type entries.
  const std::vector<std::string>& get_tokens(const std::string& key) const;

  // Keys actually present, for strict schema checks.
  std::vector<std::string> keys() const;

  // Throws ConfigError naming every key not in the allowed set. Indexed
  // families may be allowed via a trailing dot prefix ("setpoint.").
  void require_known(const std::set<std::string>& allowed,
                     const std::vector<std::string>& allowed_prefixes = {}) const;

  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::string origin_;

  const std::vector<std::string>& tokens(const std::string& key) const;
};

}  // namespace dpsim
