#include "dpsim/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dpsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

KeyValueFile KeyValueFile::parse(const std::string& text, const std::string& origin) {
  KeyValueFile kv;
  kv.origin_ = origin;

  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected `key = value`");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    }
    if (kv.entries_.count(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }

    std::vector<std::string> toks;
    std::stringstream vs(trim(line.substr(eq + 1)));
    std::string tok;
    while (vs >> tok) toks.push_back(tok);
    kv.entries_[key] = std::move(toks);
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

bool KeyValueFile::has(const std::string& key) const { return entries_.count(key) > 0; }

const std::vector<std::string>& KeyValueFile::tokens(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ConfigError(origin_ + ": missing required key '" + key + "'");
  }
  return it->second;
}

std::string KeyValueFile::get_string(const std::string& key) const {
  const auto& toks = tokens(key);
  if (toks.size() != 1) {
    throw ConfigError(origin_ + ": key '" + key + "' expects a single value");
  }
  return toks[0];
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueFile::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError(origin_ + ": key '" + key + "': not a number: '" + s + "'");
  }
  return v;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValueFile::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigError(origin_ + ": key '" + key + "': expected an integer");
  }
  return i;
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(origin_ + ": key '" + key + "': expected a boolean, got '" + s + "'");
}

std::vector<double> KeyValueFile::get_vector(const std::string& key, std::size_t expected) const {
  const auto& toks = tokens(key);
  if (expected != 0 && toks.size() != expected) {
    throw ConfigError(origin_ + ": key '" + key + "' expects " + std::to_string(expected) +
                      " values, got " + std::to_string(toks.size()));
  }
  std::vector<double> out;
  out.reserve(toks.size());
  for (const auto& s : toks) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
      throw ConfigError(origin_ + ": key '" + key + "': not a number: '" + s + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> KeyValueFile::get_vector(const std::string& key, std::size_t expected,
                                             const std::vector<double>& fallback) const {
  return has(key) ? get_vector(key, expected) : fallback;
}

const std::vector<std::string>& KeyValueFile::get_tokens(const std::string& key) const {
  return tokens(key);
}

std::vector<std::string> KeyValueFile::keys() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [k, _] : entries_) out.push_back(k);
  return out;
}

void KeyValueFile::require_known(const std::set<std::string>& allowed,
                                 const std::vector<std::string>& allowed_prefixes) const {
  for (const auto& [key, _] : entries_) {
    if (allowed.count(key)) continue;
    const bool prefixed = std::any_of(
        allowed_prefixes.begin(), allowed_prefixes.end(),
        [&key](const std::string& p) { return key.rfind(p, 0) == 0; });
    if (!prefixed) {
      throw ConfigError(origin_ + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace dpsim
