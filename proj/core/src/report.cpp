#include "ctdde/report.hpp"

#include "ctdde/util.hpp"

namespace ctdde {

void Report::add(std::string_view key, std::string_view value) {
  entries_.emplace_back(std::string(key), std::string(value));
}

void Report::add(std::string_view key, const char* value) {
  add(key, std::string_view(value));
}

void Report::add(std::string_view key, double value) {
  add(key, std::string_view(util::fmt_double(value)));
}

void Report::add(std::string_view key, bool value) {
  add(key, std::string_view(value ? "true" : "false"));
}

void Report::add(std::string_view key, long long value) {
  add(key, std::string_view(std::to_string(value)));
}

void Report::add(std::string_view key, int value) { add(key, static_cast<long long>(value)); }

void Report::extend(std::string_view prefix, const Report& other) {
  for (const auto& [k, v] : other.entries_) {
    entries_.emplace_back(std::string(prefix) + k, v);
  }
}

std::string Report::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace ctdde
