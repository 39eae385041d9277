#pragma once

#include "expsamp/common.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace expsamp {

/// A real function on (0, inf) with a declared support. Values outside the
/// support are 0. `breakpoints` lists points (in u) where the function may be
/// discontinuous or non-smooth; quadrature splits there.
class Signal {
public:
  using Fn = std::function<double(double)>;

  Signal(std::string name, Fn fn, Interval support, Interval range_bounds,
         std::vector<double> breakpoints = {});

  [[nodiscard]] double operator()(double u) const {
    if (u < support_.lo || u > support_.hi) return 0.0;
    return (*fn_)(u);
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const Interval& support() const { return support_; }
  [[nodiscard]] const Interval& range_bounds() const { return range_; }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return breakpoints_; }

  /// sup |h| implied by the declared range (0 is included because of the
  /// zero extension).
  [[nodiscard]] double sup_abs() const {
    return std::max({std::abs(range_.lo), std::abs(range_.hi), 0.0});
  }
  [[nodiscard]] bool unit_valued() const { return range_.lo >= 0.0 && range_.hi <= 1.0; }

private:
  std::string name_;
  std::shared_ptr<const Fn> fn_;
  Interval support_;
  Interval range_;
  std::vector<double> breakpoints_;
};

/// h == c on (0, inf).
[[nodiscard]] Signal constant_signal(double c);

/// f(u) = arctan((sin(pi u) + 1) / (1 + u^2)) / arctan(2) on [0, 3].
[[nodiscard]] Signal builtin_f();

/// Piecewise test function on [0, 3]:
///   0.1 + 0.8/9 u^2                 0   <= u < 1.1
///   0.9 - 0.4 sin^2(2 pi (u - 1.1)) 1.1 <= u < 2.0
///   0.3 + 0.7 (3 - u)               2.0 <= u <= 3
[[nodiscard]] Signal builtin_g();

/// Loads `u,value` rows (optional header). Values are linearly interpolated
/// in log u and are 0 outside the sampled range. Throws Error on I/O or parse
/// failure, non-positive u, or fewer than two rows.
[[nodiscard]] Signal signal_from_csv(const std::filesystem::path& path);

/// `f`, `g`, `const:<c>` or `file:<path>`.
[[nodiscard]] Signal parse_signal(std::string_view id);

/// Pointwise combinations; supports and breakpoints are merged.
[[nodiscard]] Signal scaled(const Signal& h, double lambda);
[[nodiscard]] Signal sum(const Signal& a, const Signal& b);
[[nodiscard]] Signal abs_diff(const Signal& a, const Signal& b);

struct Jump {
  double at = 0.0;
  double left = 0.0;
  double right = 0.0;
  [[nodiscard]] double size() const { return std::abs(right - left); }
};

/// Compares one-sided limits at every declared breakpoint and returns those
/// whose jump exceeds `tol`.
[[nodiscard]] std::vector<Jump> detect_jumps(const Signal& h, double tol = 1e-9);

/// Smallest and largest value over `samples` log-uniform points of the support
/// (clamped to [1e-6, 1e6] for unbounded ends).
[[nodiscard]] Interval sampled_range(const Signal& h, int samples = 2001);

} // namespace expsamp
