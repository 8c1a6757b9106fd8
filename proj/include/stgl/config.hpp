#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "stgl/common.hpp"

namespace stgl {

/// Value of one config key: scalar or a flat array of numbers.
using ConfigValue = std::variant<std::string, std::int64_t, double, bool, std::vector<double>>;

/// Minimal TOML-subset reader covering the run-config format: [section]
/// headers, key = value pairs with strings, integers, floats, booleans,
/// flat numeric arrays, and # comments.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_string(const std::string& text);

  bool has(const std::string& section, const std::string& key) const;

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& section, const std::string& key) const;
  std::optional<double> get_double(const std::string& section, const std::string& key) const;
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;
  std::optional<std::vector<double>> get_array(const std::string& section,
                                               const std::string& key) const;

  const std::map<std::string, std::map<std::string, ConfigValue>>& sections() const {
    return sections_;
  }

 private:
  const ConfigValue* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, ConfigValue>> sections_;
};

/// "0..5" (inclusive) or "0,1,2" -> seed list.
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace stgl
