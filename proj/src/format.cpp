#include "frostgrid/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "frostgrid/errors.hpp"

namespace frostgrid {

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string format_fixed_min(double v, int min_decimals) {
  if (!std::isfinite(v)) throw InvalidArgument("cannot format a non-finite coordinate");
  if (v == 0.0) v = 0.0;
  std::array<char, 512> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
  std::string s(buf.data(), res.ptr);
  const auto dot = s.find('.');
  const int have = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
  if (dot == std::string::npos) s += '.';
  for (int i = have; i < min_decimals; ++i) s += '0';
  return s;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw ParseError("not a number: '" + s + "'");
  return v;
}

}  // namespace frostgrid
