#include "expsamp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace expsamp {

double sup_over(std::span<const double> values) {
  if (values.empty()) throw Error("sup_over: empty list");
  return *std::max_element(values.begin(), values.end());
}

OperatorParams::OperatorParams(int n_, Kernel phi_, Kernel psi_)
    : n(n_), phi(std::move(phi_)), psi(std::move(psi_)) {
  quad = QuadratureSpec::for_kernel(psi);
}

OperatorParams::OperatorParams(int n_, Kernel phi_, Kernel psi_, QuadratureSpec quad_)
    : n(n_), phi(std::move(phi_)), psi(std::move(psi_)), quad(quad_) {}

void OperatorParams::validate() const {
  if (n < 1) throw Error("operator: n must be >= 1");
  if (!(k_window_pad >= 0.0)) throw Error("operator: window pad must be >= 0");
  if (!(unbounded_window_radius > 0.0)) throw Error("operator: window radius must be > 0");
  if (domain && (domain->empty() || domain->hi <= 0.0))
    throw Error("operator: domain must be a nonempty interval in (0, inf)");
  quad.validate();
}

std::vector<long> index_window(const Kernel& phi, int n, double z, double pad,
                               double unbounded_radius) {
  if (!(z > 0.0) || !std::isfinite(z)) throw Error("index_window: z must be finite and > 0");
  const double dn = static_cast<double>(n);
  const double c = dn * std::log(z);
  double a = -dn * unbounded_radius;
  double b = dn * unbounded_radius;
  if (const auto& s = phi.log_support()) {
    a = s->lo - dn * pad;
    b = s->hi + dn * pad;
  }
  // Phi(z^n e^{-k}) = profile(c - k) is nonzero only for a <= c - k <= b.
  const auto k_lo = static_cast<long>(std::ceil(c - b - 1e-9));
  const auto k_hi = static_cast<long>(std::floor(c - a + 1e-9));
  std::vector<long> out;
  for (long k = k_lo; k <= k_hi; ++k) out.push_back(k);
  return out;
}

namespace {

const Signal& unit_signal() {
  static const Signal one = constant_signal(1.0);
  return one;
}

void check_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream msg;
    msg.imbue(std::locale::classic());
    msg << "operator: z must be finite and > 0 (got " << z << ")";
    throw Error(msg.str());
  }
}

// Fills the window, kernel values and both coefficient lists.
EvalTrace collect(const Signal& h, double z, const OperatorParams& p) {
  p.validate();
  check_z(z);
  EvalTrace tr;
  tr.z = z;
  tr.k_indices = index_window(p.phi, p.n, z, p.k_window_pad, p.unbounded_window_radius);
  const double c = static_cast<double>(p.n) * std::log(z);
  const std::size_t m = tr.k_indices.size();
  tr.kernel_values.assign(m, 0.0);
  tr.coefficients.assign(m, 0.0);
  tr.normalizers.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const long k = tr.k_indices[i];
    const double phik = p.phi.at_log(c - static_cast<double>(k));
    tr.kernel_values[i] = phik;
    if (phik == 0.0) continue;
    tr.coefficients[i] = durrmeyer_coefficient(p.psi, h, p.n, k, p.quad, p.domain).value;
    tr.normalizers[i] = durrmeyer_coefficient(p.psi, unit_signal(), p.n, k, p.quad, p.domain).value;
    if (!p.domain)
      tr.normalizer_deviation = std::max(tr.normalizer_deviation, std::abs(tr.normalizers[i] - 1.0));
  }
  // Indices outside the window contribute Phi = 0, i.e. a term equal to 0.
  double den = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    den = std::max(den, tr.kernel_values[i] * tr.normalizers[i]);
  if (!(den >= p.positivity_threshold)) {
    std::ostringstream msg;
    msg.imbue(std::locale::classic());
    msg << "operator: denominator " << den << " below positivity threshold at z = " << z
        << ", n = " << p.n;
    throw Error(msg.str());
  }
  tr.denominator = den;
  return tr;
}

} // namespace

EvalTrace max_product_durrmeyer(const Signal& h, double z, const OperatorParams& params) {
  EvalTrace tr = collect(h, z, params);
  double num = 0.0;
  for (std::size_t i = 0; i < tr.k_indices.size(); ++i)
    num = std::max(num, tr.kernel_values[i] * tr.coefficients[i]);
  tr.numerator = num;
  tr.value = num / tr.denominator;
  return tr;
}

EvalTrace max_min_durrmeyer(const Signal& h, double z, const OperatorParams& params) {
  if (!h.unit_valued())
    throw Error("max-min operator: signal '" + h.name() + "' is not [0,1]-valued");
  EvalTrace tr = collect(h, z, params);
  double best = 0.0;
  for (std::size_t i = 0; i < tr.k_indices.size(); ++i)
    best = std::max(best, min_pair(tr.coefficients[i], tr.kernel_values[i] / tr.denominator));
  tr.numerator = best;
  tr.value = best;
  return tr;
}

double linear_durrmeyer(const Signal& h, double z, const OperatorParams& params) {
  params.validate();
  check_z(z);
  const double c = static_cast<double>(params.n) * std::log(z);
  double acc = 0.0;
  for (long k : index_window(params.phi, params.n, z, params.k_window_pad,
                             params.unbounded_window_radius)) {
    const double phik = params.phi.at_log(c - static_cast<double>(k));
    if (phik == 0.0) continue;
    acc += phik * durrmeyer_coefficient(params.psi, h, params.n, k, params.quad, params.domain).value;
  }
  return acc;
}

double kantorovich(const Signal& h, double z, const OperatorParams& params) {
  params.validate();
  check_z(z);
  const double dn = static_cast<double>(params.n);
  const double c = dn * std::log(z);
  Interval u_range = h.support();
  if (params.domain) u_range = intersect(u_range, *params.domain);
  double acc = 0.0;
  for (long k : index_window(params.phi, params.n, z, params.k_window_pad,
                             params.unbounded_window_radius)) {
    const double dk = static_cast<double>(k);
    const double phik = params.phi.at_log(c - dk);
    if (phik == 0.0) continue;
    // n \int_{k/n}^{(k+1)/n} h(e^u) du  ==  \int_0^1 h(e^{(v+k)/n}) dv
    Interval v_range{0.0, 1.0};
    if (u_range.lo > 0.0) v_range.lo = std::max(v_range.lo, dn * std::log(u_range.lo) - dk);
    if (std::isfinite(u_range.hi)) v_range.hi = std::min(v_range.hi, dn * std::log(u_range.hi) - dk);
    if (v_range.empty()) continue;
    std::vector<double> cuts;
    for (double ub : h.breakpoints())
      if (ub > 0.0) cuts.push_back(dn * std::log(ub) - dk);
    const auto q = integrate_log_domain([&](double v) { return h(std::exp((v + dk) / dn)); },
                                        v_range.lo, v_range.hi, cuts, params.quad.panels_per_unit);
    acc += phik * q.value;
  }
  return acc;
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
  case OperatorKind::MaxProduct: return "max-product";
  case OperatorKind::MaxMin: return "max-min";
  case OperatorKind::Linear: return "linear";
  case OperatorKind::Kantorovich: return "kantorovich";
  }
  return "unknown";
}

OperatorKind parse_operator(std::string_view name) {
  for (auto k : {OperatorKind::MaxProduct, OperatorKind::MaxMin, OperatorKind::Linear,
                 OperatorKind::Kantorovich})
    if (to_string(k) == name) return k;
  throw Error("unknown operator '" + std::string(name) + "'");
}

double apply_operator(OperatorKind kind, const Signal& h, double z, const OperatorParams& params) {
  switch (kind) {
  case OperatorKind::MaxProduct: return max_product_durrmeyer(h, z, params).value;
  case OperatorKind::MaxMin: return max_min_durrmeyer(h, z, params).value;
  case OperatorKind::Linear: return linear_durrmeyer(h, z, params);
  case OperatorKind::Kantorovich: return kantorovich(h, z, params);
  }
  throw Error("unknown operator kind");
}

} // namespace expsamp
