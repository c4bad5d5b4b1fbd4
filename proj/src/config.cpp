#include "spoofwatch/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "spoofwatch/error.hpp"

namespace spoofwatch {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  return true;
}

// Drops a trailing comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_str = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_str && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_str = !in_str;
    } else if (c == '#' && !in_str) {
      return line.substr(0, i);
    }
  }
  return line;
}

struct ScalarParser {
  std::string_view s;
  bool lenient = false;

  Config::Scalar parse() const {
    if (s.empty()) throw std::invalid_argument("missing value");
    if (s.front() == '"') return parse_string();
    if (s == "true") return true;
    if (s == "false") return false;
    std::string clean;
    for (char c : s)
      if (c != '_') clean.push_back(c);
    std::string_view t = clean;
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    std::int64_t iv = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), iv);
    if (ec == std::errc() && p == t.data() + t.size()) return iv;
    double dv = 0.0;
    auto [q, ec2] = std::from_chars(t.data(), t.data() + t.size(), dv);
    if (ec2 == std::errc() && q == t.data() + t.size() && std::isfinite(dv)) return dv;
    if (lenient) return std::string(s);
    throw std::invalid_argument(fmt::format("cannot parse value '{}'", s));
  }

  Config::Scalar parse_string() const {
    if (s.size() < 2 || s.back() != '"') throw std::invalid_argument("unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      char c = s[i];
      if (c == '\\') {
        if (i + 2 >= s.size()) throw std::invalid_argument("dangling escape");
        switch (s[++i]) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: throw std::invalid_argument("unsupported escape");
        }
      } else if (c == '"') {
        throw std::invalid_argument("unexpected quote in string");
      }
      out.push_back(c);
    }
    return out;
  }
};

std::vector<std::string_view> split_array(std::string_view body) {
  std::vector<std::string_view> items;
  bool in_str = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const char c = body[i];
    if (in_str && c == '\\') {
      ++i;
    } else if (c == '"') {
      in_str = !in_str;
    } else if (c == '[' && !in_str) {
      throw std::invalid_argument("nested arrays are not supported");
    } else if (c == ',' && !in_str) {
      items.push_back(trim(body.substr(start, i - start)));
      start = i + 1;
    }
  }
  const auto last = trim(body.substr(start));
  if (!last.empty()) items.push_back(last);  // trailing comma allowed
  for (const auto& it : items)
    if (it.empty()) throw std::invalid_argument("empty array element");
  return items;
}

Config::Value parse_value(std::string_view raw, bool lenient) {
  raw = trim(raw);
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw std::invalid_argument("unterminated array");
    std::vector<Config::Scalar> items;
    for (auto item : split_array(raw.substr(1, raw.size() - 2))) items.push_back(ScalarParser{item, false}.parse());
    return items;
  }
  return ScalarParser{raw, lenient}.parse();
}

std::string kind_error(const std::string& key, const char* want) {
  return fmt::format("'{}' must be {}", key, want);
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config c;
  std::string section;
  std::size_t lineno = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    try {
      if (line.front() == '[') {
        if (line.back() != ']') throw std::invalid_argument("malformed section header");
        const auto name = trim(line.substr(1, line.size() - 2));
        if (!valid_key(name)) throw std::invalid_argument("invalid section name");
        section = std::string(name);
        continue;
      }
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) throw std::invalid_argument("expected key = value");
      const auto key = trim(line.substr(0, eq));
      if (!valid_key(key)) throw std::invalid_argument(fmt::format("invalid key '{}'", key));
      const std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
      if (c.values_.count(full)) throw std::invalid_argument(fmt::format("duplicate key '{}'", full));
      c.values_[full] = parse_value(line.substr(eq + 1), false);
    } catch (const std::invalid_argument& e) {
      throw Error(ErrorCode::ConfigError, fmt::format("line {}: {}", lineno, e.what()));
    }
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::set(const std::string& key, std::string_view raw) {
  try {
    values_[key] = parse_value(raw, true);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ConfigError, fmt::format("override {}: {}", key, e.what()));
  }
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<Scalar>(&it->second)) {
    if (const auto* d = std::get_if<double>(s)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(s)) return static_cast<double>(*i);
  }
  throw Error(ErrorCode::ConfigError, kind_error(key, "a number"));
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<Scalar>(&it->second))
    if (const auto* i = std::get_if<std::int64_t>(s)) return *i;
  throw Error(ErrorCode::ConfigError, kind_error(key, "an integer"));
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::int64_t v = get_int(key, 0);
  if (v < 0) throw Error(ErrorCode::ConfigError, kind_error(key, "non-negative"));
  return static_cast<std::uint64_t>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<Scalar>(&it->second))
    if (const auto* b = std::get_if<bool>(s)) return *b;
  throw Error(ErrorCode::ConfigError, kind_error(key, "a boolean"));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (const auto* s = std::get_if<Scalar>(&it->second))
    if (const auto* str = std::get_if<std::string>(s)) return *str;
  throw Error(ErrorCode::ConfigError, kind_error(key, "a string"));
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto* arr = std::get_if<std::vector<Scalar>>(&it->second);
  if (!arr) throw Error(ErrorCode::ConfigError, kind_error(key, "an array of numbers"));
  std::vector<double> out;
  for (const auto& s : *arr) {
    if (const auto* d = std::get_if<double>(&s)) {
      out.push_back(*d);
    } else if (const auto* i = std::get_if<std::int64_t>(&s)) {
      out.push_back(static_cast<double>(*i));
    } else {
      throw Error(ErrorCode::ConfigError, kind_error(key, "an array of numbers"));
    }
  }
  return out;
}

std::vector<std::int64_t> Config::get_ints(const std::string& key, const std::vector<std::int64_t>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const auto* arr = std::get_if<std::vector<Scalar>>(&it->second);
  if (!arr) throw Error(ErrorCode::ConfigError, kind_error(key, "an array of integers"));
  std::vector<std::int64_t> out;
  for (const auto& s : *arr) {
    const auto* i = std::get_if<std::int64_t>(&s);
    if (!i) throw Error(ErrorCode::ConfigError, kind_error(key, "an array of integers"));
    out.push_back(*i);
  }
  return out;
}

}  // namespace spoofwatch
