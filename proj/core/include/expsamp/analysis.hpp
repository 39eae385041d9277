#pragma once

#include "expsamp/common.hpp"
#include "expsamp/kernels.hpp"
#include "expsamp/operators.hpp"
#include "expsamp/signal.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace expsamp {

struct ModulusOptions {
  /// Log-uniform grid size.
  int grid = 4096;
  /// Scan interval in u. Defaults to the signal support with infinite or zero
  /// ends clamped to log u in [-20, 20].
  std::optional<Interval> scan;
};

/// Logarithmic modulus of continuity
///   sup { |h(s) - h(t)| : |log s - log t| <= varsigma }
/// over pairs of a log-uniform grid. A lower estimate of the continuum sup.
/// Throws Error for varsigma <= 0 or an empty scan interval.
[[nodiscard]] double log_modulus(const Signal& h, double varsigma, const ModulusOptions& opts = {});

struct ErrorCell {
  double z = 0.0;
  int n = 0;
  double approx = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
  /// Set when the operator failed at this cell.
  std::optional<std::string> failure;
};

/// Pointwise absolute errors over a (z, n) grid, z outer and n inner.
struct ErrorReport {
  std::string operator_name;
  std::string signal_name;
  std::vector<double> grid;
  std::vector<int> n_values;
  std::vector<ErrorCell> cells;

  [[nodiscard]] const ErrorCell& at(std::size_t zi, std::size_t ni) const {
    return cells.at(zi * n_values.size() + ni);
  }
  [[nodiscard]] bool has_failures() const;
  /// max over z of abs_error for the ni-th n.
  [[nodiscard]] double sup_error(std::size_t ni) const;
};

/// Evaluates `kind` at every (z, n) pair; `params` supplies everything except n.
/// Cells are evaluated concurrently; the report is deterministic.
[[nodiscard]] ErrorReport pointwise_errors(OperatorKind kind, const Signal& h,
                                           std::span<const double> z_list,
                                           std::span<const int> n_list,
                                           const OperatorParams& params);

struct RateBoundInputs {
  MomentReport m0_phi;
  MomentReport m1_phi;
  MomentReport M0_psi;
  MomentReport M1_psi;
  double floor = 0.0;
};

struct RateBound {
  /// Empty when a required moment diverges.
  std::optional<double> value;
  double varsigma = 0.0;
  double modulus = 0.0;
  [[nodiscard]] bool divergent() const { return !value.has_value(); }
};

/// Right-hand side of the max-product rate estimate
///   (w/theta) m0 M0 + w/(n theta varsigma) (m0 M1 + m1 M0),  w = modulus(h, varsigma).
[[nodiscard]] RateBound rate_bound_maxproduct(const Signal& h, double varsigma,
                                              const RateBoundInputs& in, int n,
                                              const ModulusOptions& mod = {});

/// The bound above minimised over varsigma in [1/n, 1] by golden-section search.
[[nodiscard]] RateBound optimal_rate_bound_maxproduct(const Signal& h, const RateBoundInputs& in,
                                                      int n, const ModulusOptions& mod = {});

/// Computes the moments and floor used by the rate bound.
[[nodiscard]] RateBoundInputs rate_bound_inputs(const Kernel& phi, const Kernel& psi);

struct RateEstimate {
  /// Empty when some sup error is zero (slope undefined).
  std::optional<double> slope;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<int> n_values;
  std::vector<double> sup_errors;
  [[nodiscard]] bool undefined() const { return !slope.has_value(); }
};

/// Sup errors at or below this level count as zero.
inline constexpr double kZeroErrorLevel = 1e-12;

/// Least-squares slope of log(sup-grid error) against log n. The slope is
/// left empty when some sup error is zero (see kZeroErrorLevel).
/// Throws Error when fewer than 4 distinct n values are present or a cell failed.
[[nodiscard]] RateEstimate estimate_rate(const ErrorReport& report);

} // namespace expsamp
