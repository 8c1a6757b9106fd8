#include "stgl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace stgl {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_integer(const std::string& t, std::int64_t& out) {
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && p == t.data() + t.size();
}

bool parse_float(const std::string& t, double& out) {
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && !t.empty();
}

ConfigValue parse_value(const std::string& raw, std::int64_t line) {
  const std::string t = trim(raw);
  if (t.empty()) throw ParseError("missing value", line);
  if (t.front() == '"') {
    if (t.size() < 2 || t.back() != '"') throw ParseError("unterminated string", line);
    return t.substr(1, t.size() - 2);
  }
  if (t == "true") return true;
  if (t == "false") return false;
  if (t.front() == '[') {
    if (t.back() != ']') throw ParseError("unterminated array", line);
    std::vector<double> vals;
    std::string body = t.substr(1, t.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string it = trim(item);
      if (it.empty()) continue;
      double v = 0;
      if (!parse_float(it, v)) throw ParseError("bad array element '" + it + "'", line);
      vals.push_back(v);
    }
    return vals;
  }
  std::int64_t iv = 0;
  if (parse_integer(t, iv)) return iv;
  double dv = 0;
  if (parse_float(t, dv)) return dv;
  throw ParseError("cannot parse value '" + t + "'", line);
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile cfg;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  std::int64_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", lineno);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError("empty section name", lineno);
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", lineno);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", lineno);
    cfg.sections_[section][key] = parse_value(line.substr(eq + 1), lineno);
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_string(ss.str());
}

const ConfigValue* ConfigFile::find(const std::string& section, const std::string& key) const {
  const auto sit = sections_.find(section);
  if (sit == sections_.end()) return nullptr;
  const auto kit = sit->second.find(key);
  return kit == sit->second.end() ? nullptr : &kit->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::optional<std::string> ConfigFile::get_string(const std::string& section,
                                                  const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (const auto* s = std::get_if<std::string>(v)) return *s;
  throw ValidationError("config key " + section + "." + key + " is not a string");
}

std::optional<std::int64_t> ConfigFile::get_int(const std::string& section,
                                                const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
  throw ValidationError("config key " + section + "." + key + " is not an integer");
}

std::optional<double> ConfigFile::get_double(const std::string& section,
                                             const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (const auto* d = std::get_if<double>(v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  throw ValidationError("config key " + section + "." + key + " is not a number");
}

std::optional<bool> ConfigFile::get_bool(const std::string& section, const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (const auto* b = std::get_if<bool>(v)) return *b;
  throw ValidationError("config key " + section + "." + key + " is not a boolean");
}

std::optional<std::vector<double>> ConfigFile::get_array(const std::string& section,
                                                         const std::string& key) const {
  const auto* v = find(section, key);
  if (!v) return std::nullopt;
  if (const auto* a = std::get_if<std::vector<double>>(v)) return *a;
  throw ValidationError("config key " + section + "." + key + " is not an array");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    std::int64_t lo = 0, hi = 0;
    if (!parse_integer(trim(text.substr(0, dots)), lo) ||
        !parse_integer(trim(text.substr(dots + 2)), hi) || hi < lo || lo < 0)
      throw ValidationError("bad seed range '" + text + "'");
    for (std::int64_t s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
    return seeds;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::int64_t v = 0;
    if (!parse_integer(trim(item), v) || v < 0)
      throw ValidationError("bad seed '" + item + "'");
    seeds.push_back(static_cast<std::uint64_t>(v));
  }
  if (seeds.empty()) throw ValidationError("empty seed list");
  return seeds;
}

}  // namespace stgl
