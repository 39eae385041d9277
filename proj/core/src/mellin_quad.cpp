#include "expsamp/mellin_quad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace expsamp {

void QuadratureSpec::validate() const {
  if (!(truncation_radius > 0.0)) throw Error("quadrature: truncation radius must be > 0");
  if (panels_per_unit < 1) throw Error("quadrature: panels per unit must be >= 1");
  if (!(abs_tol > 0.0)) throw Error("quadrature: abs_tol must be > 0");
}

QuadratureSpec QuadratureSpec::for_kernel(const Kernel& psi, double target, double cap) {
  QuadratureSpec spec;
  spec.abs_tol = target;
  if (const auto& s = psi.log_support()) {
    spec.truncation_radius = std::max(-s->lo, s->hi);
    return spec;
  }
  // tail_bound is nonincreasing; bisect for the smallest T with bound <= target.
  if (!(psi.tail_bound(cap) <= target)) {
    spec.truncation_radius = cap;
    return spec;
  }
  double lo = 1e-3;
  double hi = cap;
  for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (psi.tail_bound(mid) <= target ? hi : lo) = mid;
  }
  spec.truncation_radius = hi;
  return spec;
}

namespace {

[[noreturn]] void non_finite(double x, double v) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "non-finite integrand sample " << v << " at x = " << x;
  throw QuadratureError(msg.str(), x);
}

struct Piece {
  double value = 0.0;
  double est_error = 0.0;
  long evaluations = 0;
};

// Composite Simpson on [a, b] with a panel count that is a multiple of 4, so
// the half-density estimate reuses the even nodes.
Piece simpson_piece(const std::function<double(double)>& g, double a, double b,
                    int panels_per_unit) {
  const double len = b - a;
  long m = static_cast<long>(std::ceil(len * panels_per_unit / 4.0)) * 4;
  m = std::max(m, 4L);
  const double h = len / static_cast<double>(m);
  // Endpoints are sampled just inside the piece.
  const double nudge_a = 1e-10 * std::max(1.0, std::abs(a));
  const double nudge_b = 1e-10 * std::max(1.0, std::abs(b));

  double fine = 0.0;
  double coarse = 0.0;
  for (long i = 0; i <= m; ++i) {
    double x = a + static_cast<double>(i) * h;
    if (i == 0) x = a + std::min(nudge_a, 0.25 * h);
    if (i == m) x = b - std::min(nudge_b, 0.25 * h);
    const double v = g(x);
    if (!std::isfinite(v)) non_finite(x, v);
    const double wf = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    fine += wf * v;
    if (i % 2 == 0) {
      const long j = i / 2;
      const long mc = m / 2;
      const double wc = (j == 0 || j == mc) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      coarse += wc * v;
    }
  }
  fine *= h / 3.0;
  coarse *= 2.0 * h / 3.0;
  return {fine, std::abs(fine - coarse) / 15.0, m + 1};
}

} // namespace

QuadResult integrate_log_domain(const std::function<double(double)>& g, double a, double b,
                                std::span<const double> breakpoints, int panels_per_unit) {
  QuadResult out;
  if (!(a < b)) return out;
  if (!std::isfinite(a) || !std::isfinite(b))
    throw Error("integrate_log_domain: limits must be finite");
  if (panels_per_unit < 1) throw Error("integrate_log_domain: panels_per_unit must be >= 1");

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    const auto p = simpson_piece(g, cuts[i], cuts[i + 1], panels_per_unit);
    out.value += p.value;
    out.est_error += p.est_error;
    out.evaluations += p.evaluations;
  }
  return out;
}

QuadResult integrate_mellin_log(const std::function<double(double)>& g, const QuadratureSpec& spec,
                                const std::optional<TailModel>& tail,
                                std::span<const double> breakpoints) {
  spec.validate();
  const double T = spec.truncation_radius;
  auto out = integrate_log_domain(g, -T, T, breakpoints, spec.panels_per_unit);
  if (tail) {
    if (tail->bound) out.est_error += tail->bound(T);
    if (tail->has_mass_model()) out.value += tail->mass_left(T) + tail->mass_right(T);
  }
  return out;
}

QuadResult integrate_mellin(const std::function<double(double)>& f, const QuadratureSpec& spec,
                            const std::optional<TailModel>& tail,
                            std::span<const double> breakpoints) {
  std::vector<double> xs;
  xs.reserve(breakpoints.size());
  for (double t : breakpoints)
    if (t > 0.0) xs.push_back(std::log(t));
  return integrate_mellin_log([&f](double x) { return f(std::exp(x)); }, spec, tail, xs);
}

CoefficientResult durrmeyer_coefficient(const Kernel& psi, const Signal& h, int n, long k,
                                        const QuadratureSpec& spec,
                                        const std::optional<Interval>& domain) {
  if (n < 1) throw Error("durrmeyer_coefficient: n must be >= 1");
  spec.validate();
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);

  // u-range where h can be nonzero, then mapped to x = n log u - k.
  Interval u_range = h.support();
  if (domain) u_range = intersect(u_range, *domain);
  CoefficientResult out;
  if (u_range.empty() || u_range.hi <= 0.0) return out;
  const double x_lo = u_range.lo > 0.0 ? dn * std::log(u_range.lo) - dk : -kInf;
  const double x_hi = std::isfinite(u_range.hi) ? dn * std::log(u_range.hi) - dk : kInf;

  Interval window{x_lo, x_hi};
  const double T = spec.truncation_radius;
  if (const auto& s = psi.log_support()) {
    window = intersect(window, *s);
  } else {
    window = intersect(window, Interval{-T, T});
  }
  if (window.empty()) return out;

  std::vector<double> cuts = psi.knots();
  for (double ub : h.breakpoints())
    if (ub > 0.0) cuts.push_back(dn * std::log(ub) - dk);

  const auto integrand = [&](double x) {
    return psi.at_log(x) * h(std::exp((x + dk) / dn));
  };
  const auto q = integrate_log_domain(integrand, window.lo, window.hi, cuts, spec.panels_per_unit);
  out.value = q.value;
  out.est_error = q.est_error;
  out.evaluations = q.evaluations;

  // Tails beyond +-T where h is still (possibly) nonzero.
  if (!psi.log_support()) {
    const auto& tail = psi.tail();
    const bool cut_left = x_lo < -T;
    const bool cut_right = x_hi > T;
    if (cut_left || cut_right) {
      out.est_error += psi.tail_bound(T) * h.sup_abs();
      if (tail && tail->has_mass_model()) {
        if (cut_left) out.value += tail->mass_left(T) * h(std::exp((-T + dk) / dn));
        if (cut_right) out.value += tail->mass_right(T) * h(std::exp((T + dk) / dn));
      }
    }
  }
  out.above_tolerance = out.est_error > spec.abs_tol;
  return out;
}

} // namespace expsamp
