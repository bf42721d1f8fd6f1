#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rieszlab {

// Bad key, bad value or an unreadable config file. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct KeySpec {
  std::string key;    // dotted name used in config files
  std::string flag;   // command-line spelling without the dashes
  std::string value;  // default
  std::string help;
  bool is_switch = false;  // flag takes no argument and sets "true"
};

const std::vector<KeySpec>& key_registry();

// Config file grammar, one entry per line:
//   key = value      # trailing comment
// Blank lines and lines starting with '#' are ignored. Keys must be
// registered; repeating a key is an error.
class Config {
 public:
  Config();

  void load_file(const std::string& path);
  void load_text(const std::string& text, const std::string& origin);
  // "key=value", as given to --set or derived from a flag.
  void set(const std::string& key, const std::string& value);
  void set_assignment(const std::string& assignment);

  const std::string& str(const std::string& key) const;
  double real(const std::string& key) const;
  double positive(const std::string& key) const;
  long integer(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t min = 1) const;
  std::uint64_t seed() const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;  // comma separated

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace rieszlab
