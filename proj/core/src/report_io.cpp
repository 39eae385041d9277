#include "expsamp/report_io.hpp"

#include <charconv>

namespace expsamp {

std::string format_g6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
  if (ec != std::errc()) throw Error("format_g6: conversion failed");
  return {buf, ptr};
}

namespace {

void write_rows(std::ostream& os, const ErrorReport& r, const std::string& prefix) {
  for (const auto& c : r.cells)
    os << prefix << format_g6(c.z) << ',' << c.n << ',' << format_g6(c.approx) << ','
       << format_g6(c.exact) << ',' << format_g6(c.abs_error) << '\n';
}

} // namespace

void write_error_csv(std::ostream& os, const ErrorReport& report) {
  os << "z,n,approx,exact,abs_error\n";
  write_rows(os, report, "");
}

void write_multi_error_csv(std::ostream& os, std::span<const ErrorReport> reports) {
  os << "operator,z,n,approx,exact,abs_error\n";
  for (const auto& r : reports) write_rows(os, r, r.operator_name + ",");
}

void write_rate_csv(std::ostream& os, const RateEstimate& est) {
  os << "n,sup_error\n";
  for (std::size_t i = 0; i < est.n_values.size(); ++i)
    os << est.n_values[i] << ',' << format_g6(est.sup_errors[i]) << '\n';
}

} // namespace expsamp
