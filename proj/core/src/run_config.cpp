#include "expsamp/run_config.hpp"

#include "expsamp/kernels.hpp"

#include <charconv>
#include <system_error>

namespace expsamp {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw Error("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s.empty() || ec != std::errc() || ptr != end)
    throw Error("invalid " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

template <class T>
std::string join(const std::vector<T>& xs, auto fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += fmt(xs[i]);
  }
  return out;
}

} // namespace

std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_real: conversion failed");
  return {buf, ptr};
}

std::vector<double> ZGrid::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i)
    out.push_back(i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1));
  return out;
}

std::vector<int> parse_int_list(std::string_view text) {
  std::vector<int> out;
  for (auto part : split(text, ',')) {
    const int n = parse_int(part, "integer");
    if (n < 1) throw Error("n values must be >= 1");
    out.push_back(n);
  }
  return out;
}

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto part : split(text, ',')) {
    const double z = parse_real(part, "number");
    if (!(z > 0.0)) throw Error("z values must be > 0");
    out.push_back(z);
  }
  return out;
}

std::vector<OperatorKind> parse_operator_list(std::string_view text) {
  std::vector<OperatorKind> out;
  for (auto part : split(text, ',')) out.push_back(parse_operator(part));
  return out;
}

ZGrid parse_z_grid(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw Error("z grid must be lo:hi:count");
  ZGrid g{parse_real(parts[0], "grid bound"), parse_real(parts[1], "grid bound"),
          parse_int(parts[2], "grid count")};
  if (!(g.lo > 0.0) || !(g.lo < g.hi)) throw Error("z grid needs 0 < lo < hi");
  if (g.count < 2) throw Error("z grid needs count >= 2");
  return g;
}

std::string parse_domain(std::string_view text) {
  if (text == "auto" || text == "full") return std::string(text);
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw Error("domain must be auto, full or lo:hi");
  const double lo = parse_real(parts[0], "domain bound");
  const double hi = parse_real(parts[1], "domain bound");
  if (!(lo >= 0.0) || !(lo < hi)) throw Error("domain needs 0 <= lo < hi");
  return std::string(text);
}

OutputFormat parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "svg") return OutputFormat::Svg;
  throw Error("unknown format '" + std::string(text) + "'");
}

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Svg ? "svg" : "csv"; }

std::vector<double> RunConfig::z_values() const { return z_grid ? z_grid->values() : z_list; }

std::optional<Interval> RunConfig::resolved_domain() const {
  if (domain == "full") return std::nullopt;
  if (domain == "auto") {
    if (signal == "f" || signal == "g") return Interval{0.1, 3.0};
    return std::nullopt;
  }
  const auto parts = split(domain, ':');
  return Interval{parse_real(parts.at(0), "domain bound"), parse_real(parts.at(1), "domain bound")};
}

OperatorParams RunConfig::make_params(int n) const {
  const Kernel psi_k = parse_kernel(psi);
  OperatorParams p(n, parse_kernel(phi), psi_k, QuadratureSpec::for_kernel(psi_k, quad_tol));
  p.domain = resolved_domain();
  return p;
}

std::vector<std::string> RunConfig::to_args() const {
  std::vector<std::string> a{"--phi", phi, "--psi", psi};
  a.insert(a.end(), {"--op", join(operators, [](OperatorKind k) { return std::string(to_string(k)); })});
  a.insert(a.end(), {"--signal", signal});
  a.insert(a.end(), {"--n", join(n_list, [](int n) { return std::to_string(n); })});
  a.insert(a.end(), {"--z", join(z_list, format_real)});
  if (z_grid)
    a.insert(a.end(), {"--z-grid", format_real(z_grid->lo) + ":" + format_real(z_grid->hi) + ":" +
                                       std::to_string(z_grid->count)});
  a.insert(a.end(), {"--domain", domain});
  a.insert(a.end(), {"--quad-tol", format_real(quad_tol)});
  if (out) a.insert(a.end(), {"--out", *out});
  a.insert(a.end(), {"--format", std::string(to_string(format))});
  return a;
}

} // namespace expsamp
