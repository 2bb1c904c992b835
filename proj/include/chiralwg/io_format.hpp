#ifndef CHIRALWG_IO_FORMAT_HPP
#define CHIRALWG_IO_FORMAT_HPP

#include <string>

#include "chiralwg/common.hpp"

namespace chiralwg {

// Shortest decimal representation that round-trips the double exactly.
// Negative zero is canonicalized to "0" so outputs are byte-stable.
std::string format_double(double v);

// "-1", "0.5", "-0.5+0.25i", "-i"-style complex formatting for summaries.
std::string format_complex(const Complex& z);

// Strict locale-free parse of a full token; throws on trailing garbage.
double parse_double(const std::string& token);

}  // namespace chiralwg

#endif
