#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "dkc/cli/app.hpp"

namespace dkc::cli {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific, 11);
  return std::string(buf, res.ptr);
}

double round_to_output(double value) {
  if (!std::isfinite(value)) return value;
  const std::string s = format_number(value);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

}  // namespace dkc::cli
