#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "nsg/types.hpp"

// Flat key=value configuration. A Config is created with the set of keys it
// accepts; anything else is rejected at parse time. Files use one key=value
// per line with '#' comments; flag overrides call set() after the file loads,
// so flags win.

namespace nsg::config {

class Config {
 public:
  explicit Config(std::set<std::string> allowed);

  void loadFile(const std::string& path);
  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string getString(const std::string& key, const std::string& fallback) const;
  std::int64_t getInt(const std::string& key, std::int64_t fallback) const;
  Scalar getReal(const std::string& key, Scalar fallback) const;
  bool getBool(const std::string& key, bool fallback) const;

  // "0..49" or "1,3,10..12"; inclusive ranges
  std::vector<std::uint64_t> getSeedList(const std::string& key,
                                         const std::string& fallback) const;

 private:
  void checkKnown(const std::string& key) const;

  std::set<std::string> allowed_;
  std::map<std::string, std::string> values_;
};

std::vector<std::uint64_t> parseSeedList(const std::string& text);

}  // namespace nsg::config
