#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sdcl {

/// Typed configuration value. Lists may nest.
struct ConfigValue {
  enum class Kind { boolean, integer, real, string, list };

  Kind kind = Kind::string;
  bool b = false;
  std::int64_t i = 0;
  double r = 0.0;
  std::string s;
  std::vector<ConfigValue> items;

  static ConfigValue boolean(bool v);
  static ConfigValue integer(std::int64_t v);
  static ConfigValue real(double v);
  static ConfigValue string(std::string v);
  static ConfigValue list(std::vector<ConfigValue> v);

  /// Canonical text: integers in decimal, reals with 17 significant digits,
  /// strings quoted, lists as [a, b].
  std::string canonical() const;
};

/// Experiment configuration file.
///
///   # comment
///   [section]
///   key = value
///
/// Values are true/false, integers, reals, "quoted strings", bare words, or
/// bracketed comma-separated lists of those. Keys are unique per section.
class Config {
 public:
  using Section = std::map<std::string, ConfigValue>;

  static Config parse(const std::string& text);
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const { return sections_.contains(section); }
  const ConfigValue* find(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, ConfigValue value);
  /// Parses `section.key=value` and stores it.
  void apply_override(const std::string& assignment);

  std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& section, const std::string& key, std::uint64_t fallback) const;
  std::size_t get_size(const std::string& section, const std::string& key, std::size_t fallback) const;
  double get_real(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  std::optional<std::string> get_optional_string(const std::string& section, const std::string& key) const;
  /// Scalars are promoted to one-element lists.
  std::vector<double> get_real_list(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const;
  std::vector<std::size_t> get_size_list(const std::string& section, const std::string& key,
                                         std::vector<std::size_t> fallback) const;
  std::vector<std::string> get_string_list(const std::string& section, const std::string& key,
                                           std::vector<std::string> fallback) const;

  /// Sorted `[section]` / `key = value` text for the named sections (all
  /// when empty). Sections that are absent are skipped.
  std::string canonical(const std::vector<std::string>& sections = {}) const;
  std::string digest(const std::vector<std::string>& sections = {}) const;

  const std::map<std::string, Section>& sections() const noexcept { return sections_; }

 private:
  std::map<std::string, Section> sections_;
};

/// Parses a single value literal.
ConfigValue parse_config_value(const std::string& text, std::size_t line = 0);

}  // namespace sdcl
