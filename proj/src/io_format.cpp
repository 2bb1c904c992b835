#include "chiralwg/io_format.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace chiralwg {

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_complex(const Complex& z) {
  if (z.imag() == 0.0) return format_double(z.real());
  std::string s;
  if (z.real() != 0.0) s += format_double(z.real());
  const double im = z.imag();
  if (im > 0 && !s.empty()) s += "+";
  if (im == 1.0) {
    s += "i";
  } else if (im == -1.0) {
    s += "-i";
  } else {
    s += format_double(im) + "i";
  }
  return s;
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw std::invalid_argument("malformed number: '" + token + "'");
  }
  if (!std::isfinite(v)) {
    throw std::invalid_argument("non-finite number: '" + token + "'");
  }
  return v;
}

}  // namespace chiralwg
