#include "qct/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qct {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line, int col,
                       const std::string& message) {
  throw Error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
              ": " + message);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        fail(origin, line, static_cast<int>(raw.size()), "missing ']'");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) fail(origin, line, 2, "bad section name");
      cfg.sections_[section];  // empty sections are legal
      continue;
    }
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos)
      fail(origin, line, 1, "expected 'key = value'");
    const std::string key = trim(raw.substr(0, eq));
    if (!valid_name(key)) fail(origin, line, 1, "bad key name");
    if (section.empty()) fail(origin, line, 1, "key before any [section]");
    std::string value = trim(raw.substr(eq + 1));
    const std::size_t hash = value.find_first_of("#;");
    if (hash != std::string::npos) value = trim(value.substr(0, hash));
    if (value.empty())
      fail(origin, line, static_cast<int>(eq) + 2, "empty value");
    auto& sec = cfg.sections_[section];
    if (sec.count(key))
      fail(origin, line, 1, "duplicate key '" + key + "' in [" + section + "]");
    sec[key] = Entry{value, line, false};
  }
  return cfg;
}

void Config::apply_override(const std::string& dotted_key,
                            const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= dotted_key.size())
    throw Error("--set expects section.key=value, got '" + dotted_key + "'");
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  if (!valid_name(section) || !valid_name(key))
    throw Error("--set: bad section or key in '" + dotted_key + "'");
  sections_[section][key] = Entry{trim(value), 0, false};
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const Config::Entry* Config::find(const std::string& section,
                                  const std::string& key) const {
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return nullptr;
  const auto it = sec->second.find(key);
  if (it == sec->second.end()) return nullptr;
  return &it->second;
}

std::string Config::str(const std::string& section, const std::string& key,
                        const std::string& fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return e->value;
}

double Config::parse_number(const std::string& section, const std::string& key,
                            const Entry& e) const {
  char* end = nullptr;
  const double v = std::strtod(e.value.c_str(), &end);
  if (end == e.value.c_str() || *end != '\0')
    fail(origin_, e.line, 1,
         "value of " + section + "." + key + " is not a number: '" + e.value +
             "'");
  return v;
}

double Config::num(const std::string& section, const std::string& key,
                   double fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  return parse_number(section, key, *e);
}

long Config::integer(const std::string& section, const std::string& key,
                     long fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  const double v = parse_number(section, key, *e);
  const long i = static_cast<long>(v);
  if (static_cast<double>(i) != v)
    fail(origin_, e->line, 1, section + "." + key + " must be an integer");
  return i;
}

bool Config::flag(const std::string& section, const std::string& key,
                  bool fallback) {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  e->consumed = true;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  fail(origin_, e->line, 1, section + "." + key + " must be a boolean");
}

Vec Config::vec(const std::string& section, const std::string& key) {
  const Entry* e = find(section, key);
  if (!e) throw Error("missing required key " + section + "." + key);
  e->consumed = true;
  std::vector<double> vals;
  std::string item;
  std::istringstream in(e->value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || end == item.c_str() || *end != '\0')
      fail(origin_, e->line, 1,
           section + "." + key + " must be comma-separated numbers");
    vals.push_back(v);
  }
  if (vals.empty())
    fail(origin_, e->line, 1, section + "." + key + " is empty");
  Vec out(static_cast<Index>(vals.size()));
  for (Index i = 0; i < out.size(); ++i)
    out[i] = vals[static_cast<std::size_t>(i)];
  return out;
}

std::map<std::string, double> Config::numbers(const std::string& section) {
  std::map<std::string, double> out;
  const auto sec = sections_.find(section);
  if (sec == sections_.end()) return out;
  for (auto& [key, entry] : sec->second) {
    if (entry.consumed) continue;
    entry.consumed = true;
    out[key] = parse_number(section, key, entry);
  }
  return out;
}

void Config::ensure_consumed() const {
  std::vector<std::string> leftover;
  for (const auto& [section, keys] : sections_)
    for (const auto& [key, entry] : keys)
      if (!entry.consumed)
        leftover.push_back("[" + section + "] " + key + " (line " +
                           std::to_string(entry.line) + ")");
  if (!leftover.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : leftover) msg += " " + k + ";";
    throw Error(msg);
  }
}

}  // namespace qct
