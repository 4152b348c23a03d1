#pragma once

// Line-oriented CSV reading shared by the file parsers.

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "edgecap/calibration.hpp"

namespace edgecap::detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Requires `header` as the first non-comment line, then yields data rows
/// with their 1-based line numbers. Blank lines and `#` comments are skipped.
class CsvReader {
 public:
  CsvReader(std::istream& in, std::string_view header) : in_(in) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      std::string got;
      for (const auto& f : split(t, ',')) got += (got.empty() ? "" : ",") + f;
      if (got != header) {
        throw ParseError(line_no_, "expected header '" + std::string(header) + "', found '" +
                                       std::string(t) + "'");
      }
      return;
    }
    throw ParseError(line_no_ + 1, "missing header '" + std::string(header) + "'");
  }

  std::optional<std::pair<std::size_t, std::vector<std::string>>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      return std::make_pair(line_no_, split(t, ','));
    }
    return std::nullopt;
  }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace edgecap::detail
