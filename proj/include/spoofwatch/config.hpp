#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spoofwatch {

// Reader for the TOML subset the CLI needs: [section] headers, key = value
// pairs, basic strings, integers, floats, booleans, single-line flat arrays
// and # comments. Keys are stored as "section.key".
class Config {
 public:
  using Scalar = std::variant<bool, std::int64_t, double, std::string>;
  using Value = std::variant<Scalar, std::vector<Scalar>>;

  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  // Parses `raw` as a value; unquoted text that is not a number, boolean or
  // array is taken as a string.
  void set(const std::string& key, std::string_view raw);
  void set_string(const std::string& key, std::string value) { values_[key] = Scalar(std::move(value)); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::vector<std::string> keys() const;

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::int64_t> get_ints(const std::string& key, const std::vector<std::int64_t>& fallback) const;

 private:
  std::map<std::string, Value> values_;
};

}  // namespace spoofwatch
