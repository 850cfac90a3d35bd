#include "sdcl/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sdcl/digest.hpp"
#include "sdcl/error.hpp"

namespace sdcl {

ConfigValue ConfigValue::boolean(bool v) {
  ConfigValue out;
  out.kind = Kind::boolean;
  out.b = v;
  return out;
}

ConfigValue ConfigValue::integer(std::int64_t v) {
  ConfigValue out;
  out.kind = Kind::integer;
  out.i = v;
  return out;
}

ConfigValue ConfigValue::real(double v) {
  ConfigValue out;
  out.kind = Kind::real;
  out.r = v;
  return out;
}

ConfigValue ConfigValue::string(std::string v) {
  ConfigValue out;
  out.kind = Kind::string;
  out.s = std::move(v);
  return out;
}

ConfigValue ConfigValue::list(std::vector<ConfigValue> v) {
  ConfigValue out;
  out.kind = Kind::list;
  out.items = std::move(v);
  return out;
}

std::string ConfigValue::canonical() const {
  switch (kind) {
    case Kind::boolean: return b ? "true" : "false";
    case Kind::integer: return std::to_string(i);
    case Kind::real: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", r);
      std::string text = buf;
      if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
      return text;
    }
    case Kind::string: {
      std::string text = "\"";
      for (char c : s) {
        if (c == '"' || c == '\\') text += '\\';
        text += c;
      }
      return text + "\"";
    }
    case Kind::list: {
      std::string text = "[";
      for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) text += ", ";
        text += items[k].canonical();
      }
      return text + "]";
    }
  }
  return {};
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Drops a trailing '#' comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted && c == '\\') {
      ++k;
    } else if (c == '"') {
      quoted = !quoted;
    } else if (c == '#' && !quoted) {
      return line.substr(0, k);
    }
  }
  return line;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::vector<std::string> split_top_level(const std::string& body, std::size_t line) {
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  bool quoted = false;
  for (std::size_t k = 0; k < body.size(); ++k) {
    const char c = body[k];
    if (quoted) {
      current += c;
      if (c == '\\' && k + 1 < body.size()) {
        current += body[++k];
      } else if (c == '"') {
        quoted = false;
      }
      continue;
    }
    if (c == '"') quoted = true;
    if (c == '[') ++depth;
    if (c == ']' && --depth < 0) throw ParseError("unbalanced ']'", line);
    if (c == ',' && depth == 0) {
      parts.push_back(trim(current));
      current.clear();
      continue;
    }
    current += c;
  }
  if (quoted) throw ParseError("unterminated string", line);
  if (depth != 0) throw ParseError("unbalanced '['", line);
  parts.push_back(trim(current));
  return parts;
}

}  // namespace

ConfigValue parse_config_value(const std::string& raw, std::size_t line) {
  const std::string text = trim(raw);
  if (text.empty()) throw ParseError("missing value", line);

  if (text.front() == '[') {
    if (text.back() != ']') throw ParseError("list must end with ']'", line);
    const std::string body = trim(text.substr(1, text.size() - 2));
    std::vector<ConfigValue> items;
    if (!body.empty()) {
      for (const auto& part : split_top_level(body, line)) {
        if (part.empty()) throw ParseError("empty list element", line);
        items.push_back(parse_config_value(part, line));
      }
    }
    return ConfigValue::list(std::move(items));
  }

  if (text.front() == '"') {
    std::string out;
    std::size_t k = 1;
    for (; k < text.size() && text[k] != '"'; ++k) {
      if (text[k] == '\\') {
        if (++k == text.size()) break;
      }
      out += text[k];
    }
    if (k != text.size() - 1) throw ParseError("malformed quoted string", line);
    return ConfigValue::string(std::move(out));
  }

  if (text == "true") return ConfigValue::boolean(true);
  if (text == "false") return ConfigValue::boolean(false);

  const char* begin = text.data();
  const char* end = text.data() + text.size();
  std::int64_t iv = 0;
  const char* ibegin = (*begin == '+') ? begin + 1 : begin;
  if (auto [p, ec] = std::from_chars(ibegin, end, iv); ec == std::errc{} && p == end) {
    return ConfigValue::integer(iv);
  }
  double rv = 0.0;
  if (auto [p, ec] = std::from_chars(ibegin, end, rv); ec == std::errc{} && p == end) {
    if (!std::isfinite(rv)) throw ParseError("non-finite number '" + text + "'", line);
    return ConfigValue::real(rv);
  }

  for (char c : text) {
    if (c == ',' || c == '[' || c == ']' || c == '"' || c == '=' || std::isspace(static_cast<unsigned char>(c))) {
      throw ParseError("unquoted string '" + text + "' contains '" + std::string(1, c) + "'", line);
    }
  }
  return ConfigValue::string(text);
}

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!is_identifier(section)) throw ParseError("invalid section name '" + section + "'", line_no);
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    if (section.empty()) throw ParseError("key outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    if (!is_identifier(key)) throw ParseError("invalid key '" + key + "'", line_no);
    auto& sec = cfg.sections_[section];
    if (sec.contains(key)) throw ParseError("duplicate key '" + key + "' in [" + section + "]", line_no);
    sec.emplace(key, parse_config_value(line.substr(eq + 1), line_no));
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Config::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const ConfigValue* Config::find(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void Config::set(const std::string& section, const std::string& key, ConfigValue value) {
  sections_[section][key] = std::move(value);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override '" + assignment + "' must look like section.key=value");
  }
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  if (!is_identifier(section) || !is_identifier(key)) throw ConfigError("invalid override target in '" + assignment + "'");
  try {
    set(section, key, parse_config_value(assignment.substr(eq + 1)));
  } catch (const ParseError& e) {
    throw ConfigError("invalid override value in '" + assignment + "': " + e.what());
  }
}

namespace {

[[noreturn]] void wrong_type(const std::string& section, const std::string& key, const char* expected) {
  throw ConfigError("[" + section + "] " + key + " must be " + expected);
}

}  // namespace

std::int64_t Config::get_int(const std::string& section, const std::string& key, std::int64_t fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != ConfigValue::Kind::integer) wrong_type(section, key, "an integer");
  return v->i;
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key, std::uint64_t fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != ConfigValue::Kind::integer || v->i < 0) wrong_type(section, key, "a non-negative integer");
  return static_cast<std::uint64_t>(v->i);
}

std::size_t Config::get_size(const std::string& section, const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(get_uint(section, key, fallback));
}

double Config::get_real(const std::string& section, const std::string& key, double fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (v->kind == ConfigValue::Kind::integer) return static_cast<double>(v->i);
  if (v->kind != ConfigValue::Kind::real) wrong_type(section, key, "a number");
  return v->r;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != ConfigValue::Kind::boolean) wrong_type(section, key, "true or false");
  return v->b;
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  if (v->kind != ConfigValue::Kind::string) wrong_type(section, key, "a string");
  return v->s;
}

std::optional<std::string> Config::get_optional_string(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  return get_string(section, key, {});
}

namespace {

std::vector<ConfigValue> as_items(const ConfigValue& v) {
  if (v.kind == ConfigValue::Kind::list) return v.items;
  return {v};
}

}  // namespace

std::vector<double> Config::get_real_list(const std::string& section, const std::string& key,
                                          std::vector<double> fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& item : as_items(*v)) {
    if (item.kind == ConfigValue::Kind::integer) {
      out.push_back(static_cast<double>(item.i));
    } else if (item.kind == ConfigValue::Kind::real) {
      out.push_back(item.r);
    } else {
      wrong_type(section, key, "a list of numbers");
    }
  }
  return out;
}

std::vector<std::size_t> Config::get_size_list(const std::string& section, const std::string& key,
                                               std::vector<std::size_t> fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  std::vector<std::size_t> out;
  for (const auto& item : as_items(*v)) {
    if (item.kind != ConfigValue::Kind::integer || item.i < 0) wrong_type(section, key, "a list of non-negative integers");
    out.push_back(static_cast<std::size_t>(item.i));
  }
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& section, const std::string& key,
                                                 std::vector<std::string> fallback) const {
  const auto* v = find(section, key);
  if (!v) return fallback;
  std::vector<std::string> out;
  for (const auto& item : as_items(*v)) {
    if (item.kind != ConfigValue::Kind::string) wrong_type(section, key, "a list of strings");
    out.push_back(item.s);
  }
  return out;
}

std::string Config::canonical(const std::vector<std::string>& sections) const {
  std::string out;
  auto emit = [&](const std::string& name, const Section& sec) {
    out += "[" + name + "]\n";
    for (const auto& [key, value] : sec) out += key + " = " + value.canonical() + "\n";
  };
  if (sections.empty()) {
    for (const auto& [name, sec] : sections_) emit(name, sec);
    return out;
  }
  std::vector<std::string> names = sections;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& name : names) {
    const auto it = sections_.find(name);
    if (it != sections_.end()) emit(name, it->second);
  }
  return out;
}

std::string Config::digest(const std::vector<std::string>& sections) const { return digest_of(canonical(sections)); }

}  // namespace sdcl
