#pragma once

#include "expsamp/common.hpp"
#include "expsamp/operators.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace expsamp {

/// `lo:hi:count`, count >= 2 points including both ends.
struct ZGrid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  [[nodiscard]] std::vector<double> values() const;
  friend bool operator==(const ZGrid&, const ZGrid&) = default;
};

enum class OutputFormat { Csv, Svg };

/// Everything a CLI run needs. The textual form is the flag list produced by
/// to_args(); parsing it back yields an equal config.
struct RunConfig {
  std::string phi = "bspline:2";
  std::string psi = "fejer:pi:0";
  std::vector<OperatorKind> operators{OperatorKind::MaxProduct};
  std::string signal = "f";
  std::vector<int> n_list{5, 10, 15, 20};
  std::vector<double> z_list{0.3, 0.8, 1.5, 2.2, 2.8};
  std::optional<ZGrid> z_grid;
  /// `auto`, `full` or `lo:hi`. `auto` restricts the built-in signals f and g
  /// to [0.1, 3] and leaves other signals on the full half-line.
  std::string domain = "auto";
  double quad_tol = 1e-9;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::Csv;

  /// z_grid values when set, otherwise z_list.
  [[nodiscard]] std::vector<double> z_values() const;
  /// Interval the operators act on, resolved against the signal identifier.
  [[nodiscard]] std::optional<Interval> resolved_domain() const;
  /// Operator parameters for the given n (kernels parsed, domain resolved).
  [[nodiscard]] OperatorParams make_params(int n) const;

  /// Flag list (`--phi`, value, ...) describing every field.
  [[nodiscard]] std::vector<std::string> to_args() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parsers for flag values. All throw Error on malformed input.
[[nodiscard]] std::vector<int> parse_int_list(std::string_view text);
[[nodiscard]] std::vector<double> parse_real_list(std::string_view text);
[[nodiscard]] std::vector<OperatorKind> parse_operator_list(std::string_view text);
[[nodiscard]] ZGrid parse_z_grid(std::string_view text);
/// Accepts `auto`, `full` or `lo:hi` with 0 <= lo < hi.
[[nodiscard]] std::string parse_domain(std::string_view text);
[[nodiscard]] OutputFormat parse_format(std::string_view text);
[[nodiscard]] std::string_view to_string(OutputFormat f);

/// Shortest text that reads back to the same double (C locale).
[[nodiscard]] std::string format_real(double v);

} // namespace expsamp
