#include "micromaser/format.hpp"

#include <array>
#include <charconv>
#include <system_error>

#include "micromaser/error.hpp"

namespace micromaser {

std::string format_shortest(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

std::string format_scientific(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific);
  return std::string(buf.data(), end);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  }
  return value;
}

}  // namespace micromaser
