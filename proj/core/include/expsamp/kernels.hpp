#pragma once

#include "expsamp/common.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace expsamp {

/// Tail behaviour of a kernel without compact support, in the log domain
/// x = log t.
struct TailModel {
  /// Upper bound on the two-sided tail mass  \int_{|x|>T} |K(e^x)| dx.
  std::function<double(double)> bound;
  /// Asymptotic estimate of \int_{x>T} K(e^x) dx (right) and
  /// \int_{x<-T} K(e^x) dx (left). Empty when no model is known.
  std::function<double(double)> mass_right;
  std::function<double(double)> mass_left;

  [[nodiscard]] bool has_mass_model() const { return mass_right && mass_left; }
};

/// A real kernel on (0, inf), stored through its log-domain profile
/// x -> K(e^x). The same type serves both roles of the sampling operators:
/// the discrete-side kernel (Phi) and the integral-side kernel (Psi).
///
/// Construction requires either a compact log-domain support or a tail model;
/// without one of them the lattice sums and Mellin integrals would have no
/// finite truncation.
class Kernel {
public:
  using LogProfile = std::function<double(double)>;

  Kernel(std::string name, LogProfile profile, std::optional<Interval> log_support,
         std::optional<TailModel> tail, std::vector<double> knots = {});

  /// K(z) for z > 0.
  [[nodiscard]] double operator()(double z) const { return at_log(std::log(z)); }

  /// K(e^x). Zero outside the declared log support.
  [[nodiscard]] double at_log(double x) const {
    if (log_support_ && (x < log_support_->lo || x > log_support_->hi)) return 0.0;
    return (*profile_)(x);
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const std::optional<Interval>& log_support() const { return log_support_; }
  [[nodiscard]] const std::optional<TailModel>& tail() const { return tail_; }
  /// Log-domain points where the profile is not smooth.
  [[nodiscard]] const std::vector<double>& knots() const { return knots_; }

  /// Bound on \int_{|x|>T} |K(e^x)| dx; 0 beyond a compact support.
  [[nodiscard]] double tail_bound(double radius) const;

private:
  std::string name_;
  std::shared_ptr<const LogProfile> profile_;
  std::optional<Interval> log_support_;
  std::optional<TailModel> tail_;
  std::vector<double> knots_;
};

/// Mellin B-spline of the given order,
///   B_n(z) = 1/(n-1)! sum_{k=0}^{n} (-1)^k C(n,k) (n/2 + log z - k)_+^{n-1},
/// supported on log z in [-n/2, n/2]. Evaluated with the Cox-de Boor
/// recurrence. Throws Error for order 0 or order > 30.
[[nodiscard]] Kernel mellin_bspline(int order);

/// Mellin-Fejer kernel F_beta^t(z) = beta / (2 pi z^t) sinc(beta log sqrt(z) / pi)^2.
/// Throws Error for beta < 1.
[[nodiscard]] Kernel mellin_fejer(double beta, double t_param);

/// Parses `bspline:<order>` or `fejer:<beta>:<t>` (beta may be `pi`).
/// Throws Error on anything else.
[[nodiscard]] Kernel parse_kernel(std::string_view id);

/// Result of a moment computation. `value` is empty when the moment diverges.
struct MomentReport {
  int order = 0;
  std::optional<double> value;
  double est_error = 0.0;
  std::string method;

  [[nodiscard]] bool divergent() const { return !value.has_value(); }
};

struct LatticeScanOptions {
  /// Points per unit log-interval.
  int grid = 10001;
  /// Lattice radius used for kernels without compact support; doubled
  /// `doublings` times to detect growth.
  double base_radius = 16.0;
  int doublings = 6;
  /// Values beyond this are reported as divergent.
  double ceiling = 1e12;
};

/// Discrete absolute moment
///   m_r(Phi) = sup_{z>0} max_k |Phi(z e^{-k})| |log z - k|^r,
/// evaluated over one log-period z in [1, e] (the lattice is invariant under
/// integer log-shifts). The grid is refined once to confirm stability.
[[nodiscard]] MomentReport discrete_abs_moment(const Kernel& phi, int r,
                                               const LatticeScanOptions& opts = {});

/// Continuous moment \int_0^inf Psi(t) (log t)^r dt/t, or with absolute
/// values when `absolute` is set. Kernels without compact support are
/// integrated over a doubling ladder of truncation radii; increments that do
/// not decay flag divergence instead of returning a large number.
[[nodiscard]] MomentReport continuous_moment(const Kernel& psi, int r, bool absolute,
                                             double tol = 1e-8);

struct FloorReport {
  double value = 0.0;
  /// Set when the infimum fell below the positivity threshold.
  bool underflow = false;
  /// Change of the value under one grid refinement.
  double refinement_delta = 0.0;
};

/// Lattice floor  inf_{z in [1,e]} max_k Phi(z e^{-k}),  the positive lower
/// bound of the operator denominators.
[[nodiscard]] FloorReport phi_floor(const Kernel& phi, const LatticeScanOptions& opts = {},
                                    double positivity_threshold = 1e-12);

struct ConditionCheck {
  std::string name;
  bool passed = false;
  std::optional<double> measured;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionCheck> checks;
  [[nodiscard]] bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ConditionCheck& c) { return c.passed; });
  }
};

/// Checks the admissibility conditions of a kernel pair:
/// (a) m_2(Phi) finite, (b) lattice floor of Phi positive,
/// (c) |\int Psi dt/t - 1| <= tol, (d) M_0(Psi) finite.
[[nodiscard]] ValidationReport validate_kernel_pair(const Kernel& phi, const Kernel& psi,
                                                    double tol = 1e-8);

} // namespace expsamp
