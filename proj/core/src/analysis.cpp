#include "expsamp/analysis.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace expsamp {

namespace {

Interval default_scan(const Signal& h) {
  const Interval s = h.support();
  const double lo = s.lo > 0.0 ? std::max(std::log(s.lo), -20.0) : -20.0;
  const double hi = std::isfinite(s.hi) ? std::min(std::log(s.hi), 20.0) : 20.0;
  return {lo, hi};
}

} // namespace

double log_modulus(const Signal& h, double varsigma, const ModulusOptions& opts) {
  if (!(varsigma > 0.0)) throw Error("log_modulus: varsigma must be > 0");
  if (opts.grid < 2) throw Error("log_modulus: grid must be >= 2");
  Interval xr;
  if (opts.scan) {
    if (opts.scan->empty() || !(opts.scan->lo > 0.0)) throw Error("log_modulus: empty scan interval");
    xr = {std::log(opts.scan->lo), std::log(opts.scan->hi)};
  } else {
    xr = default_scan(h);
  }
  if (xr.empty()) throw Error("log_modulus: empty support");

  const auto m = static_cast<std::size_t>(opts.grid);
  const double step = xr.width() / static_cast<double>(m - 1);
  std::vector<double> x(m);
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    x[i] = i + 1 == m ? xr.hi : xr.lo + static_cast<double>(i) * step;
    v[i] = h(std::exp(x[i]));
  }

  // Sliding window over [x_j - varsigma, x_j]; the sup of |v_i - v_j| over
  // the window is max - min, tracked with monotone deques.
  std::deque<std::size_t> hi_q;
  std::deque<std::size_t> lo_q;
  std::size_t left = 0;
  double best = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    while (x[j] - x[left] > varsigma * (1.0 + 1e-12)) ++left;
    while (!hi_q.empty() && hi_q.front() < left) hi_q.pop_front();
    while (!lo_q.empty() && lo_q.front() < left) lo_q.pop_front();
    while (!hi_q.empty() && v[hi_q.back()] <= v[j]) hi_q.pop_back();
    while (!lo_q.empty() && v[lo_q.back()] >= v[j]) lo_q.pop_back();
    hi_q.push_back(j);
    lo_q.push_back(j);
    best = std::max(best, v[hi_q.front()] - v[lo_q.front()]);
  }
  return best;
}

bool ErrorReport::has_failures() const {
  return std::any_of(cells.begin(), cells.end(), [](const ErrorCell& c) { return c.failure.has_value(); });
}

double ErrorReport::sup_error(std::size_t ni) const {
  double s = 0.0;
  for (std::size_t zi = 0; zi < grid.size(); ++zi) {
    const auto& c = at(zi, ni);
    if (c.failure) return std::numeric_limits<double>::quiet_NaN();
    s = std::max(s, c.abs_error);
  }
  return s;
}

ErrorReport pointwise_errors(OperatorKind kind, const Signal& h, std::span<const double> z_list,
                             std::span<const int> n_list, const OperatorParams& params) {
  if (z_list.empty() || n_list.empty()) throw Error("pointwise_errors: empty z or n list");
  ErrorReport rep;
  rep.operator_name = std::string(to_string(kind));
  rep.signal_name = h.name();
  rep.grid.assign(z_list.begin(), z_list.end());
  rep.n_values.assign(n_list.begin(), n_list.end());
  rep.cells.resize(rep.grid.size() * rep.n_values.size());

  parallel_for(rep.cells.size(), [&](std::size_t idx) {
    const std::size_t zi = idx / rep.n_values.size();
    const std::size_t ni = idx % rep.n_values.size();
    ErrorCell& cell = rep.cells[idx];
    cell.z = rep.grid[zi];
    cell.n = rep.n_values[ni];
    cell.exact = h(cell.z);
    try {
      OperatorParams p = params;
      p.n = cell.n;
      cell.approx = apply_operator(kind, h, cell.z, p);
      cell.abs_error = std::abs(cell.approx - cell.exact);
    } catch (const Error& e) {
      cell.failure = e.what();
      cell.approx = std::numeric_limits<double>::quiet_NaN();
      cell.abs_error = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return rep;
}

RateBound rate_bound_maxproduct(const Signal& h, double varsigma, const RateBoundInputs& in, int n,
                                const ModulusOptions& mod) {
  if (!(varsigma > 0.0)) throw Error("rate bound: varsigma must be > 0");
  if (n < 1) throw Error("rate bound: n must be >= 1");
  if (!(in.floor > 0.0)) throw Error("rate bound: floor must be > 0");
  RateBound out;
  out.varsigma = varsigma;
  ModulusOptions m = mod;
  if (!m.scan) {
    // Reach one log unit past finite support ends so that jumps of the zero
    // extension are seen by the scan.
    const Interval x = default_scan(h);
    m.scan = Interval{std::exp(x.lo - (h.support().lo > 0.0 ? 1.0 : 0.0)),
                      std::exp(x.hi + (std::isfinite(h.support().hi) ? 1.0 : 0.0))};
  }
  out.modulus = log_modulus(h, varsigma, m);
  if (in.m0_phi.divergent() || in.m1_phi.divergent() || in.M0_psi.divergent() ||
      in.M1_psi.divergent())
    return out;
  const double m0 = *in.m0_phi.value;
  const double m1 = *in.m1_phi.value;
  const double M0 = *in.M0_psi.value;
  const double M1 = *in.M1_psi.value;
  const double w = out.modulus;
  const double theta = in.floor;
  out.value = (w / theta) * m0 * M0 +
              w / (static_cast<double>(n) * theta * varsigma) * (m0 * M1 + m1 * M0);
  return out;
}

RateBound optimal_rate_bound_maxproduct(const Signal& h, const RateBoundInputs& in, int n,
                                        const ModulusOptions& mod) {
  if (n < 1) throw Error("rate bound: n must be >= 1");
  auto eval = [&](double s) { return rate_bound_maxproduct(h, s, in, n, mod); };
  const double lo0 = 1.0 / static_cast<double>(n);
  RateBound best = eval(lo0);
  if (best.divergent()) return best;
  const auto keep = [&best](const RateBound& r) {
    if (*r.value < *best.value) best = r;
  };
  keep(eval(1.0));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo0;
  double b = 1.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  RateBound fc = eval(c);
  RateBound fd = eval(d);
  keep(fc);
  keep(fd);
  for (int it = 0; it < 60 && b - a > 1e-6; ++it) {
    if (*fc.value <= *fd.value) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = eval(c);
      keep(fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = eval(d);
      keep(fd);
    }
  }
  return best;
}

RateBoundInputs rate_bound_inputs(const Kernel& phi, const Kernel& psi) {
  RateBoundInputs in;
  in.m0_phi = discrete_abs_moment(phi, 0);
  in.m1_phi = discrete_abs_moment(phi, 1);
  in.M0_psi = continuous_moment(psi, 0, true);
  in.M1_psi = continuous_moment(psi, 1, true);
  in.floor = phi_floor(phi).value;
  return in;
}

RateEstimate estimate_rate(const ErrorReport& report) {
  const std::set<int> distinct(report.n_values.begin(), report.n_values.end());
  if (distinct.size() < 4) throw Error("estimate_rate: needs at least 4 distinct n values");
  if (report.has_failures()) throw Error("estimate_rate: report contains failed cells");

  RateEstimate est;
  est.n_values = report.n_values;
  for (std::size_t ni = 0; ni < report.n_values.size(); ++ni)
    est.sup_errors.push_back(report.sup_error(ni));
  // Errors at rounding level carry no rate information.
  if (std::any_of(est.sup_errors.begin(), est.sup_errors.end(),
                  [](double e) { return !(e > kZeroErrorLevel); }))
    return est;

  const auto m = static_cast<double>(est.n_values.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < est.n_values.size(); ++i) {
    sx += std::log(static_cast<double>(est.n_values[i]));
    sy += std::log(est.sup_errors[i]);
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < est.n_values.size(); ++i) {
    const double dx = std::log(static_cast<double>(est.n_values[i])) - mx;
    const double dy = std::log(est.sup_errors[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  est.slope = slope;
  est.intercept = my - slope * mx;
  const double ss_res = std::max(0.0, syy - slope * sxy);
  est.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return est;
}

} // namespace expsamp
