#pragma once

#include "expsamp/common.hpp"
#include "expsamp/kernels.hpp"
#include "expsamp/mellin_quad.hpp"
#include "expsamp/signal.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace expsamp {

/// max of a nonempty list. Throws Error on an empty list.
[[nodiscard]] double sup_over(std::span<const double> values);

/// a ^ b
[[nodiscard]] inline double min_pair(double a, double b) { return std::min(a, b); }

struct OperatorParams {
  int n = 1;
  Kernel phi;
  Kernel psi;
  QuadratureSpec quad;
  /// Extra log-radius added to the Phi support window.
  double k_window_pad = 0.0;
  /// Window radius (in units of 1/n) for a Phi without compact support.
  double unbounded_window_radius = 5.0;
  /// Interval I the operator acts on. When set, every Durrmeyer integral,
  /// the normalizer included, runs over u in I only.
  std::optional<Interval> domain;
  /// Denominators below this abort the evaluation.
  double positivity_threshold = 1e-12;

  OperatorParams(int n_, Kernel phi_, Kernel psi_);
  OperatorParams(int n_, Kernel phi_, Kernel psi_, QuadratureSpec quad_);

  /// Throws Error on n < 1, negative pad or an invalid quadrature spec.
  void validate() const;
};

/// Integers k whose lattice point z^n e^{-k} can carry a nonzero Phi value:
/// |n log z - k| within the Phi support (plus n * pad); for kernels without
/// compact support, |n log z - k| <= n * unbounded_radius.
[[nodiscard]] std::vector<long> index_window(const Kernel& phi, int n, double z, double pad,
                                             double unbounded_radius = 5.0);

struct EvalTrace {
  double z = 0.0;
  std::vector<long> k_indices;
  /// Phi(z^n e^{-k}), c_k(h) and c_k(1) for each index in the window.
  std::vector<double> kernel_values;
  std::vector<double> coefficients;
  std::vector<double> normalizers;
  double numerator = 0.0;
  double denominator = 0.0;
  double value = 0.0;
  /// max_k |c_k(1) - 1| over indices with Phi != 0.
  double normalizer_deviation = 0.0;
};

/// [max_k Phi(z^n e^{-k}) c_k(h)] / [max_k Phi(z^n e^{-k}) c_k(1)].
[[nodiscard]] EvalTrace max_product_durrmeyer(const Signal& h, double z,
                                              const OperatorParams& params);

/// max_k  c_k(h) ^ Phi(z^n e^{-k}) / max_j [Phi(z^n e^{-j}) c_j(1)].
/// Requires h to be [0,1]-valued.
[[nodiscard]] EvalTrace max_min_durrmeyer(const Signal& h, double z, const OperatorParams& params);

/// sum_k Phi(z^n e^{-k}) c_k(h).
[[nodiscard]] double linear_durrmeyer(const Signal& h, double z, const OperatorParams& params);

/// sum_k Phi(z^n e^{-k}) n \int_{k/n}^{(k+1)/n} h(e^u) du.
[[nodiscard]] double kantorovich(const Signal& h, double z, const OperatorParams& params);

enum class OperatorKind { MaxProduct, MaxMin, Linear, Kantorovich };

[[nodiscard]] std::string_view to_string(OperatorKind kind);
/// `max-product`, `max-min`, `linear`, `kantorovich`.
[[nodiscard]] OperatorKind parse_operator(std::string_view name);

/// Dispatches to the operator named by `kind`.
[[nodiscard]] double apply_operator(OperatorKind kind, const Signal& h, double z,
                                    const OperatorParams& params);

} // namespace expsamp
