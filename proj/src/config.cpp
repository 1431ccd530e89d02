#include "nsg/config.hpp"

#include <charconv>
#include <fstream>

namespace nsg::config {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

std::uint64_t parseU64(const std::string& s) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw std::invalid_argument("config: bad integer '" + s + "'");
  return v;
}

}  // namespace

Config::Config(std::set<std::string> allowed) : allowed_(std::move(allowed)) {}

void Config::checkKnown(const std::string& key) const {
  if (!allowed_.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
}

void Config::loadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open config");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line.substr(0, line.find('#')));
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
}

void Config::set(const std::string& key, const std::string& value) {
  checkKnown(key);
  values_[key] = value;
}

bool Config::has(const std::string& key) const {
  checkKnown(key);
  return values_.count(key) > 0;
}

std::string Config::getString(const std::string& key, const std::string& fallback) const {
  checkKnown(key);
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t Config::getInt(const std::string& key, std::int64_t fallback) const {
  checkKnown(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::int64_t v = 0;
  auto r = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (r.ec != std::errc() || r.ptr != it->second.data() + it->second.size())
    throw std::invalid_argument("config: key '" + key + "' wants an integer, got '" +
                                it->second + "'");
  return v;
}

Scalar Config::getReal(const std::string& key, Scalar fallback) const {
  checkKnown(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  Scalar v = 0;
  auto r = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
  if (r.ec != std::errc() || r.ptr != it->second.data() + it->second.size())
    throw std::invalid_argument("config: key '" + key + "' wants a number, got '" +
                                it->second + "'");
  return v;
}

bool Config::getBool(const std::string& key, bool fallback) const {
  checkKnown(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("config: key '" + key + "' wants a boolean, got '" + v + "'");
}

std::vector<std::uint64_t> Config::getSeedList(const std::string& key,
                                               const std::string& fallback) const {
  checkKnown(key);
  auto it = values_.find(key);
  return parseSeedList(it == values_.end() ? fallback : it->second);
}

std::vector<std::uint64_t> parseSeedList(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parseU64(item));
    } else {
      const std::uint64_t lo = parseU64(item.substr(0, dots));
      const std::uint64_t hi = parseU64(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("config: empty range '" + item + "'");
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    }
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("config: empty seed list");
  return out;
}

}  // namespace nsg::config
