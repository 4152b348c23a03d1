#include "edgecap/decimal.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace edgecap::decimal {
namespace {

struct Scientific {
  bool negative = false;
  std::string digits;  // significant digits, no leading zeros unless value is 0
  int exponent = 0;    // value = 0.d1 d2 ... * 10^(exponent + 1)
};

Scientific shortest(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::scientific);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
  std::string_view text(buf.data(), static_cast<std::size_t>(end - buf.data()));

  Scientific sci;
  std::size_t i = 0;
  if (text[i] == '-') {
    sci.negative = true;
    ++i;
  }
  for (; i < text.size() && text[i] != 'e'; ++i) {
    if (text[i] != '.') sci.digits.push_back(text[i]);
  }
  ++i;  // skip 'e'
  const char* first = text.data() + i;
  if (*first == '+') ++first;
  std::from_chars(first, text.data() + text.size(), sci.exponent);
  return sci;
}

}  // namespace

std::string format_scaled(double value, int shift) {
  if (!std::isfinite(value)) throw std::invalid_argument("cannot format non-finite value");
  if (value == 0.0) return "0";

  Scientific sci = shortest(value);
  // Drop trailing zeros; to_chars already gives the shortest form, but "1e+00"
  // style outputs carry a single digit.
  while (sci.digits.size() > 1 && sci.digits.back() == '0') sci.digits.pop_back();

  const int point = sci.exponent + shift + 1;  // digits before the decimal point
  const int len = static_cast<int>(sci.digits.size());
  std::string out = sci.negative ? "-" : "";

  if (point > 21 || point < -6) {
    out += sci.digits.substr(0, 1);
    if (len > 1) {
      out += '.';
      out += sci.digits.substr(1);
    }
    out += 'e';
    out += std::to_string(point - 1);
    return out;
  }
  if (point <= 0) {
    out += "0.";
    out.append(static_cast<std::size_t>(-point), '0');
    out += sci.digits;
  } else if (point >= len) {
    out += sci.digits;
    out.append(static_cast<std::size_t>(point - len), '0');
  } else {
    out += sci.digits.substr(0, static_cast<std::size_t>(point));
    out += '.';
    out += sci.digits.substr(static_cast<std::size_t>(point));
  }
  return out;
}

double parse_scaled(std::string_view text, int shift) {
  const auto fail = [&] {
    throw std::invalid_argument("not a decimal number: '" + std::string(text) + "'");
  };
  std::string mantissa;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    if (text[i] == '-') mantissa.push_back('-');
    ++i;
  }
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      mantissa.push_back(c);
      any_digit = true;
    } else if (c == '.' && !seen_point) {
      mantissa.push_back(c);
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail();

  long long exponent = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') fail();
    ++i;
    const char* first = text.data() + i;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc{} || ptr != last) fail();
    if (exponent > 100000 || exponent < -100000) fail();
  }
  exponent -= shift;

  const std::string scaled = mantissa + "e" + std::to_string(exponent);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(scaled.data(), scaled.data() + scaled.size(), value);
  if (ptr != scaled.data() + scaled.size()) fail();
  if (ec == std::errc::result_out_of_range) {
    throw std::invalid_argument("number out of range: '" + std::string(text) + "'");
  }
  if (ec != std::errc{}) fail();
  return value;
}

std::string fixed(double value, int decimals) {
  std::array<char, 128> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc{}) return format_scaled(value, 0);
  return std::string(buf.data(), end);
}

}  // namespace edgecap::decimal
