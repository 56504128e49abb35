#pragma once

// Dormand-Prince 5(4) with PI step control.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "pinst/errors.hpp"

namespace pinst {

struct OdeOptions {
  double rtol = 1e-11;
  double atol = 1e-12;
  double h_init = 0.0;  // 0: pick from the interval length
  double h_min = 1e-14;
  long max_steps = 2'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

template <class T, std::size_t N>
class Dopri5 {
 public:
  using State = std::array<T, N>;
  using Rhs = std::function<State(double, const State&)>;
  // Returns false when a trial state must be rejected (e.g. near a singular set).
  using Guard = std::function<bool(double, const State&)>;

  Dopri5(Rhs f, double t0, const State& y0, OdeOptions opt = {})
      : f_(std::move(f)), t_(t0), y_(y0), opt_(opt), h_(opt.h_init) {}

  void set_guard(Guard g) { guard_ = std::move(g); }

  double t() const { return t_; }
  const State& y() const { return y_; }
  const OdeStats& stats() const { return stats_; }

  // Advance exactly to t_end (either direction).
  const State& advance_to(double t_end) {
    double span = t_end - t_;
    if (span == 0.0) return y_;
    double dir = span > 0 ? 1.0 : -1.0;
    if (h_ == 0.0 || h_ * dir <= 0.0) h_ = dir * std::min(std::abs(span), std::max(1e-3 * std::abs(span), 1e-6));
    State k1 = f_(t_, y_);
    while ((t_end - t_) * dir > 0.0) {
      if (stats_.accepted + stats_.rejected >= opt_.max_steps)
        throw Error(ErrorKind::NoConvergence, "ODE step budget exhausted");
      double h = h_;
      bool last = false;
      if ((t_ + h - t_end) * dir >= 0.0) {
        h = t_end - t_;
        last = true;
      }
      State y5, k7;
      double err = trial(h, k1, y5, k7);
      bool ok = err <= 1.0 && all_finite(y5) && (!guard_ || guard_(t_ + h, y5));
      if (ok) {
        t_ = last ? t_end : t_ + h;
        y_ = y5;
        k1 = k7;
        ++stats_.accepted;
        double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        fac = std::clamp(fac, 0.2, 5.0);
        if (!last || std::abs(h * fac) < std::abs(h_)) h_ = h * fac;
      } else {
        ++stats_.rejected;
        double fac = std::isfinite(err) && err > 1.0 ? std::max(0.1, 0.9 * std::pow(err, -0.25)) : 0.25;
        h_ = h * fac;
        if (std::abs(h_) < opt_.h_min)
          throw Error(ErrorKind::NoConvergence, "step size underflow at t=" + std::to_string(t_));
      }
    }
    return y_;
  }

 private:
  static double mag(const T& v) { return std::abs(v); }
  static bool all_finite(const State& s) {
    for (const auto& v : s)
      if (!std::isfinite(std::abs(v))) return false;
    return true;
  }

  double trial(double h, const State& k1, State& y5, State& k7) const {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    State tmp;
    auto stage = [&](auto&& comb) {
      for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * comb(i);
      return tmp;
    };
    State k2 = f_(t_ + c2 * h, stage([&](std::size_t i) { return a21 * k1[i]; }));
    State k3 = f_(t_ + c3 * h, stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }));
    State k4 = f_(t_ + c4 * h,
                  stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; }));
    State k5 = f_(t_ + c5 * h, stage([&](std::size_t i) {
                    return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
                  }));
    State k6 = f_(t_ + h, stage([&](std::size_t i) {
                    return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
                  }));
    y5 = stage([&](std::size_t i) {
      return b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i];
    });
    k7 = f_(t_ + h, y5);
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      T e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = opt_.atol + opt_.rtol * std::max(mag(y_[i]), mag(y5[i]));
      double r = mag(e) / sc;
      acc += r * r;
    }
    double err = std::sqrt(acc / N);
    return std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
  }

  Rhs f_;
  Guard guard_;
  double t_;
  State y_;
  OdeOptions opt_;
  double h_;
  OdeStats stats_;
};

}  // namespace pinst
