#pragma once

#include "expsamp/analysis.hpp"

#include <ostream>
#include <string>

namespace expsamp {

/// Six significant digits, C locale (`%.6g`).
[[nodiscard]] std::string format_g6(double v);

/// `z,n,approx,exact,abs_error`, z outer and n inner. Failed cells print nan.
void write_error_csv(std::ostream& os, const ErrorReport& report);

/// Same as write_error_csv with a leading `operator` column, for several
/// reports over one grid.
void write_multi_error_csv(std::ostream& os, std::span<const ErrorReport> reports);

/// `n,sup_error`.
void write_rate_csv(std::ostream& os, const RateEstimate& est);

} // namespace expsamp
