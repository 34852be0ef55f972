#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace clusterkin {

/// Dormand-Prince 5(4) explicit Runge-Kutta pair with FSAL and a
/// proportional-integral step-size controller (Hairer & Wanner constants).
///
/// `F` is callable as `f(double t, const Vec& y, Vec& dydt)`. The local error
/// estimate is measured in the RMS norm with weights
/// `abs_tol + rel_tol * max(|y_old|, |y_new|)` and each accepted step keeps it
/// at or below one.
template <std::size_t N, class F>
class DormandPrince45 {
 public:
  using Vec = std::array<double, N>;

  struct Options {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double max_step = 0.0;  ///< 0 = unbounded
    std::size_t max_steps = 50'000'000;
  };

  DormandPrince45(F f, Options options) : f_(std::move(f)), opt_(options) {}

  /// Integrates (t, y) forward to exactly t_end. After every accepted step
  /// `observer(t, y, dydt)` is called; returning true stops early and leaves
  /// (t, y) at that step. Returns true when stopped by the observer.
  template <class Observer>
  bool advance(double& t, Vec& y, double t_end, Observer&& observer) {
    if (!(t_end > t)) return false;
    if (!have_derivative_) {
      f_(t, y, k1_);
      ++evaluations_;
      if (!all_finite(k1_)) {
        throw IntegrationError("non-finite derivative at t = " + std::to_string(t), t,
                               std::vector<double>(y.begin(), y.end()));
      }
      have_derivative_ = true;
      if (h_ <= 0.0) h_ = initial_step(t, y, t_end - t);
    }

    bool last_rejected = false;
    while (t < t_end) {
      if (accepted_ + rejected_ >= opt_.max_steps) {
        throw IntegrationError("step budget exhausted at t = " + std::to_string(t), t,
                               std::vector<double>(y.begin(), y.end()));
      }
      double h = h_;
      if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);
      const double remaining = t_end - t;
      const bool final_step = h >= remaining * (1.0 - 1e-12);
      if (final_step) h = remaining;
      if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        throw IntegrationError("step size underflow at t = " + std::to_string(t) +
                                   " (problem may be stiff or singular)",
                               t, std::vector<double>(y.begin(), y.end()));
      }

      const double err = attempt(t, y, h);
      if (err <= 1.0) {
        ++accepted_;
        const double fac11 = std::pow(err, kExpo1);
        double fac = fac11 / std::pow(err_old_, kBeta);
        fac = std::clamp(fac / kSafety, kFacMin, kFacMax);
        double h_new = h / fac;
        if (last_rejected) h_new = std::min(h_new, h);
        err_old_ = std::max(err, 1e-4);
        // Keep the unclamped proposal when the step was shortened to land on
        // t_end, so sampling does not throttle the controller.
        h_ = final_step ? std::max(h_new, h_) : h_new;
        t = final_step ? t_end : t + h;
        y = y_new_;
        k1_ = k7_;
        last_rejected = false;
        if (observer(t, static_cast<const Vec&>(y), static_cast<const Vec&>(k1_))) return true;
      } else {
        ++rejected_;
        const double shrink =
            std::isfinite(err) ? std::min(kFacMax, std::pow(err, kExpo1) / kSafety) : 10.0;
        h_ = h / shrink;
        last_rejected = true;
      }
    }
    return false;
  }

  bool advance(double& t, Vec& y, double t_end) {
    return advance(t, y, t_end, [](double, const Vec&, const Vec&) { return false; });
  }

  std::size_t accepted_steps() const noexcept { return accepted_; }
  std::size_t rejected_steps() const noexcept { return rejected_; }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kSafety = 0.9;
  static constexpr double kFacMin = 0.1;  // step may grow at most 10x
  static constexpr double kFacMax = 5.0;  // and shrink at most 5x

  static bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  }

  double weight(double a, double b) const {
    return opt_.abs_tol + opt_.rel_tol * std::max(std::abs(a), std::abs(b));
  }

  double initial_step(double t, const Vec& y, double span) {
    double dny = 0.0, dnf = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
      dny += (y[i] / sk) * (y[i] / sk);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, span);
    if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);
    Vec y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h * k1_[i];
    f_(t + h, y1, f1);
    ++evaluations_;
    double der2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y[i]);
      der2 += ((f1[i] - k1_[i]) / sk) * ((f1[i] - k1_[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, span});
    if (opt_.max_step > 0.0) h = std::min(h, opt_.max_step);
    return h;
  }

  // One trial step from (t, y) with size h. Fills y_new_ and k7_ and returns
  // the scaled error norm (infinite when a stage is not finite).
  double attempt(double t, const Vec& y, double h) {
    Vec tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (kA21 * k1_[i]);
    f_(t + kC2 * h, tmp, k2_);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (kA31 * k1_[i] + kA32 * k2_[i]);
    f_(t + kC3 * h, tmp, k3_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA41 * k1_[i] + kA42 * k2_[i] + kA43 * k3_[i]);
    f_(t + kC4 * h, tmp, k4_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA51 * k1_[i] + kA52 * k2_[i] + kA53 * k3_[i] + kA54 * k4_[i]);
    f_(t + kC5 * h, tmp, k5_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (kA61 * k1_[i] + kA62 * k2_[i] + kA63 * k3_[i] + kA64 * k4_[i] +
                           kA65 * k5_[i]);
    f_(t + h, tmp, k6_);
    for (std::size_t i = 0; i < N; ++i)
      y_new_[i] = y[i] + h * (kA71 * k1_[i] + kA73 * k3_[i] + kA74 * k4_[i] + kA75 * k5_[i] +
                              kA76 * k6_[i]);
    f_(t + h, y_new_, k7_);
    evaluations_ += 6;

    if (!all_finite(y_new_) || !all_finite(k7_)) return std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (kE1 * k1_[i] + kE3 * k3_[i] + kE4 * k4_[i] + kE5 * k5_[i] +
                            kE6 * k6_[i] + kE7 * k7_[i]);
      const double s = e / weight(y[i], y_new_[i]);
      sum += s * s;
    }
    return std::sqrt(sum / static_cast<double>(N));
  }

  static constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
  static constexpr double kA21 = 1.0 / 5;
  static constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
  static constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
  static constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                          kA54 = -212.0 / 729;
  static constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                          kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
  static constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                          kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
  // 5th-order minus 4th-order weights.
  static constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                          kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

  F f_;
  Options opt_;
  Vec k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, y_new_{};
  bool have_derivative_ = false;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  std::size_t accepted_ = 0, rejected_ = 0, evaluations_ = 0;
};

}  // namespace clusterkin
