#pragma once

#include "expsamp/common.hpp"
#include "expsamp/kernels.hpp"
#include "expsamp/signal.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>

namespace expsamp {

enum class QuadRule { CompositeSimpson };

/// Settings for integrals against the Haar measure dt/t, carried out in the
/// log domain x = log t.
struct QuadratureSpec {
  /// Log-domain truncation radius T for integrands without compact support.
  double truncation_radius = 1e4;
  /// Composite panels per unit of log-domain length (even; rounded up to a
  /// multiple of 4 per piece).
  int panels_per_unit = 64;
  QuadRule rule = QuadRule::CompositeSimpson;
  /// Accuracy target; results whose error estimate exceeds it are flagged.
  double abs_tol = 1e-9;

  /// Throws Error if a field is out of range.
  void validate() const;

  /// Default spec with T chosen from the kernel's tail bound so that the
  /// bound is below `target`, capped at `cap`.
  [[nodiscard]] static QuadratureSpec for_kernel(const Kernel& psi, double target = 1e-9,
                                                 double cap = 1e4);
};

struct QuadResult {
  double value = 0.0;
  /// Rule error estimate (one refinement) plus any tail bound.
  double est_error = 0.0;
  long evaluations = 0;
};

/// Raised when the integrand returns a non-finite sample.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double at) : Error(what), at_(at) {}
  [[nodiscard]] double at() const { return at_; }

private:
  double at_;
};

/// \int_a^b g(x) dx by composite Simpson, split at the given interior
/// breakpoints. Piece endpoints are sampled just inside the piece so that
/// jump discontinuities at breakpoints are integrated one-sidedly.
[[nodiscard]] QuadResult integrate_log_domain(const std::function<double(double)>& g, double a,
                                              double b, std::span<const double> breakpoints,
                                              int panels_per_unit);

/// \int_{e^-T}^{e^T} f(t) dt/t  ==  \int_{-T}^{T} f(e^x) dx.
/// When `tail` describes f beyond +-T, its bound is added to est_error and,
/// if it carries a mass model, the truncated mass is added to the value.
/// `breakpoints` are given in t. For T beyond ~709, e^x under- or overflows,
/// so f sees t = 0 or t = inf there; use integrate_mellin_log for such radii.
[[nodiscard]] QuadResult integrate_mellin(const std::function<double(double)>& f,
                                          const QuadratureSpec& spec,
                                          const std::optional<TailModel>& tail = std::nullopt,
                                          std::span<const double> breakpoints = {});

/// Same integral with the integrand given as x -> f(e^x) and breakpoints in x.
[[nodiscard]] QuadResult integrate_mellin_log(const std::function<double(double)>& g,
                                              const QuadratureSpec& spec,
                                              const std::optional<TailModel>& tail = std::nullopt,
                                              std::span<const double> breakpoints = {});

struct CoefficientResult {
  double value = 0.0;
  double est_error = 0.0;
  long evaluations = 0;
  /// est_error exceeded spec.abs_tol.
  bool above_tolerance = false;
};

/// Durrmeyer coefficient  n \int_0^inf Psi(u^n e^{-k}) h(u) du/u, computed as
/// \int Psi(e^x) h(e^{(x+k)/n}) dx. When `domain` is set, h is restricted to
/// u in domain. Integration stops at the kernel support, the signal support
/// or +-T; a window cut at T is completed with the kernel's tail-mass model
/// times the boundary value of h.
[[nodiscard]] CoefficientResult durrmeyer_coefficient(const Kernel& psi, const Signal& h, int n,
                                                      long k, const QuadratureSpec& spec,
                                                      const std::optional<Interval>& domain = {});

} // namespace expsamp
