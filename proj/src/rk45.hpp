#ifndef CHIRALWG_SRC_RK45_HPP
#define CHIRALWG_SRC_RK45_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "chiralwg/common.hpp"

namespace chiralwg::detail {

// Dormand-Prince 5(4) embedded pair on complex state vectors.
struct Dopri5 {
  using Rhs = std::function<void(double, const VectorXcd&, VectorXcd&)>;

  // One step of size h from (t, y). k1 = rhs(t, y) must be supplied (FSAL:
  // the previous step's k_last). Fills y5 (5th order), err (difference to
  // the embedded 4th order) and k_last = rhs(t + h, y5).
  static void step(const Rhs& rhs, double t, const VectorXcd& y, double h,
                   const VectorXcd& k1, VectorXcd& y5, VectorXcd& err,
                   VectorXcd& k_last) {
    VectorXcd k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size());
    VectorXcd tmp(y.size());

    tmp = y + h * (1.0 / 5.0) * k1;
    rhs(t + h / 5.0, tmp, k2);
    tmp = y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2);
    rhs(t + 3.0 * h / 10.0, tmp, k3);
    tmp = y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3);
    rhs(t + 4.0 * h / 5.0, tmp, k4);
    tmp = y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                   64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4);
    rhs(t + 8.0 * h / 9.0, tmp, k5);
    tmp = y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                   46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                   5103.0 / 18656.0 * k5);
    rhs(t + h, tmp, k6);

    y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                  2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
    rhs(t + h, y5, k_last);

    const VectorXcd y4 =
        y + h * (5179.0 / 57600.0 * k1 + 7571.0 / 16695.0 * k3 +
                 393.0 / 640.0 * k4 - 92097.0 / 339200.0 * k5 +
                 187.0 / 2100.0 * k6 + 1.0 / 40.0 * k_last);
    err = y5 - y4;
  }
};

struct AdaptiveOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
};

// Adaptive driver. After every accepted step the callback receives
// (t_before, y_before, t, y); it may rewind t into (t_before, t] and replace
// y (quantum jumps), returning false so the FSAL stage is recomputed.
class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(Dopri5::Rhs rhs, AdaptiveOptions opt)
      : rhs_(std::move(rhs)), opt_(opt) {}

  // Integrates y from t0 to t1 and returns the last step size so a caller
  // integrating consecutive segments can keep the controller state.
  template <typename Callback>
  double run(double t0, double t1, VectorXcd& y, double h_start,
             Callback&& after_step) {
    double t = t0;
    double h = h_start > 0 ? std::min(h_start, t1 - t0) : initial_step(t0, t1, y);
    VectorXcd k1(y.size()), y5(y.size()), err(y.size()), k_last(y.size());
    rhs_(t, y, k1);
    while (t < t1) {
      // a jump may rewind to within rounding distance of the segment end
      if (t1 - t <= 4e-15 * std::max(1.0, std::abs(t1))) break;
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        throw std::runtime_error("integrator step size underflow at t = " +
                                 std::to_string(t));
      }
      const double h_try = std::min(h, t1 - t);
      Dopri5::step(rhs_, t, y, h_try, k1, y5, err, k_last);
      const double scaled_err = error_norm(y, y5, err);
      if (scaled_err <= 1.0) {
        const double t_before = t;
        std::swap(y, y5);  // y5 now holds the pre-step state
        t = t_before + h_try;
        const bool untouched = after_step(t_before, y5, t, y);
        if (untouched) {
          k1 = k_last;
        } else {
          rhs_(t, y, k1);
        }
      }
      const double factor =
          scaled_err == 0.0
              ? 5.0
              : std::clamp(0.9 * std::pow(scaled_err, -0.2), 0.2, 5.0);
      h = h_try * factor;
    }
    return h;
  }

  const Dopri5::Rhs& rhs() const { return rhs_; }

 private:
  double initial_step(double t0, double t1, const VectorXcd& y) const {
    VectorXcd f(y.size());
    rhs_(t0, y, f);
    const double scale = f.norm() / std::max(y.norm(), 1e-12);
    const double h = 0.01 / std::max(scale, 1e-6);
    return std::min(h, (t1 - t0) * 0.1);
  }

  double error_norm(const VectorXcd& y0, const VectorXcd& y1,
                    const VectorXcd& err) const {
    double acc = 0.0;
    for (long i = 0; i < err.size(); ++i) {
      const double sc = opt_.abs_tol +
                        opt_.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
      const double e = std::abs(err(i)) / sc;
      acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(err.size()));
  }

  Dopri5::Rhs rhs_;
  AdaptiveOptions opt_;
};

}  // namespace chiralwg::detail

#endif
