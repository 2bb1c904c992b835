#ifndef CHIRALWG_COMMON_HPP
#define CHIRALWG_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace chiralwg {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::Vector3cd;
using Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// Propagation direction along the 1D channel axis (+z / -z).
enum class Direction { forward, backward };

inline const char* to_string(Direction d) {
  return d == Direction::forward ? "forward" : "backward";
}

// Dense-storage capacity limits. Beyond these, operations refuse with a
// capacity error instead of thrashing.
inline constexpr int kMaxSitesPure = 12;
inline constexpr int kMaxSitesDensity = 6;
inline constexpr int kMaxSitesSuperop = 5;

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

inline int sites_for_dim(long dim) {
  if (!is_power_of_two(dim)) {
    throw std::invalid_argument("dimension " + std::to_string(dim) +
                                " is not a power of two");
  }
  int n = 0;
  while ((1L << n) < dim) ++n;
  return n;
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace chiralwg

#endif
