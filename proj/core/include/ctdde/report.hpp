#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ctdde {

/// Ordered key-value report: one `key = value` line per entry, no
/// timestamps or other run-dependent content, so two runs over the same
/// inputs produce byte-identical text.
class Report {
 public:
  void add(std::string_view key, std::string_view value);
  void add(std::string_view key, const char* value);
  void add(std::string_view key, double value);
  void add(std::string_view key, bool value);
  void add(std::string_view key, long long value);
  void add(std::string_view key, int value);

  /// Appends every entry of `other` with `prefix` prepended to its key.
  void extend(std::string_view prefix, const Report& other);

  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ctdde
