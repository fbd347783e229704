#pragma once

#include <map>
#include <string>
#include <vector>

#include "qct/types.hpp"

namespace qct {

// Strict flat INI: [section] headers, key = value lines, # or ; comments.
// Duplicate keys and malformed lines are errors carrying line/column.
// Accessors mark keys consumed; ensure_consumed() rejects leftovers so typos
// in scenario configs cannot silently fall back to defaults.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<config>");

  // Applies "--set section.key=value"; creates or replaces the entry.
  void apply_override(const std::string& dotted_key, const std::string& value);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string str(const std::string& section, const std::string& key,
                  const std::string& fallback);
  double num(const std::string& section, const std::string& key,
             double fallback);
  long integer(const std::string& section, const std::string& key,
               long fallback);
  bool flag(const std::string& section, const std::string& key, bool fallback);
  Vec vec(const std::string& section, const std::string& key);  // "1, -2.5"

  // All still-unconsumed keys of a section as numbers (e.g. field params).
  std::map<std::string, double> numbers(const std::string& section);

  // Throws listing every key no accessor ever touched.
  void ensure_consumed() const;

  bool empty() const { return sections_.empty(); }

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool consumed = false;
  };
  std::map<std::string, std::map<std::string, Entry>> sections_;
  std::string origin_ = "<config>";

  const Entry* find(const std::string& section, const std::string& key) const;
  double parse_number(const std::string& section, const std::string& key,
                      const Entry& e) const;
};

}  // namespace qct
