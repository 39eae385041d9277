#include "expsamp/kernels.hpp"

#include "expsamp/mellin_quad.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace expsamp {

Kernel::Kernel(std::string name, LogProfile profile, std::optional<Interval> log_support,
               std::optional<TailModel> tail, std::vector<double> knots)
    : name_(std::move(name)),
      profile_(std::make_shared<const LogProfile>(std::move(profile))),
      log_support_(log_support),
      tail_(std::move(tail)),
      knots_(std::move(knots)) {
  if (!*profile_) throw Error("kernel '" + name_ + "': empty profile");
  if (!log_support_ && !(tail_ && tail_->bound))
    throw Error("kernel '" + name_ + "': needs a compact log support or a tail bound");
  if (log_support_ && log_support_->empty())
    throw Error("kernel '" + name_ + "': empty log support");
}

double Kernel::tail_bound(double radius) const {
  if (log_support_ && radius >= std::max(-log_support_->lo, log_support_->hi)) return 0.0;
  if (tail_ && tail_->bound) return tail_->bound(radius);
  return kInf;
}

namespace {

// Centered cardinal B-spline of the given order at x, via Cox-de Boor on the
// integer knots 0..order of N(y), y = x + order/2.
double cardinal_bspline(int order, double x) {
  const double y = x + 0.5 * order;
  if (y <= 0.0 || y > order) return 0.0;
  if (order == 2) return 1.0 - std::abs(x);
  // b[j] = N_m(y - j)
  std::array<double, 32> b{};
  for (int j = 0; j <= order; ++j) {
    const double s = y - j;
    b[static_cast<std::size_t>(j)] = (s > 0.0 && s <= 1.0) ? 1.0 : 0.0;
  }
  for (int m = 2; m <= order; ++m) {
    for (int j = 0; j + 1 <= order; ++j) {
      const double s = y - j;
      const auto idx = static_cast<std::size_t>(j);
      b[idx] = (s * b[idx] + (m - s) * b[idx + 1]) / (m - 1);
    }
  }
  return b[0];
}

double sinc_sq(double a) {
  // (sin a / a)^2
  if (std::abs(a) < 1e-4) {
    const double s = 1.0 - a * a / 6.0;
    return s * s;
  }
  const double s = std::sin(a) / a;
  return s * s;
}

} // namespace

Kernel mellin_bspline(int order) {
  if (order < 1) throw Error("mellin_bspline: order must be >= 1");
  if (order > 30) throw Error("mellin_bspline: order above 30 is not supported");
  const double half = 0.5 * order;
  std::vector<double> knots;
  for (int j = 0; j <= order; ++j) knots.push_back(-half + j);
  return Kernel("bspline:" + std::to_string(order),
                [order](double x) { return cardinal_bspline(order, x); },
                Interval{-half, half}, std::nullopt, std::move(knots));
}

Kernel mellin_fejer(double beta, double t_param) {
  if (!(beta >= 1.0)) throw Error("mellin_fejer: beta must be >= 1");
  if (!std::isfinite(t_param)) throw Error("mellin_fejer: t must be finite");

  TailModel tail;
  if (t_param == 0.0) {
    // |F(e^x)| <= 2 / (pi beta x^2), so the two-sided tail is <= 4 / (pi beta T).
    tail.bound = [beta](double T) { return T > 0.0 ? 4.0 / (kPi * beta * T) : kInf; };
    // \int_T^inf 2 sin^2(beta x/2) / (pi beta x^2) dx, asymptotic to O(T^-4).
    auto mass = [beta](double T) {
      const double bt = beta * T;
      return (1.0 / T + std::sin(bt) / (beta * T * T) -
              2.0 * std::cos(bt) / (beta * beta * T * T * T)) /
             (kPi * beta);
    };
    tail.mass_right = mass;
    tail.mass_left = mass;
  } else {
    // z^{-t} grows exponentially on one side of the log axis.
    tail.bound = [](double) { return kInf; };
  }

  std::ostringstream name;
  name.imbue(std::locale::classic());
  name.precision(17);
  name << "fejer:";
  if (beta == kPi) name << "pi";
  else name << beta;
  name << ":" << t_param;
  return Kernel(
      name.str(),
      [beta, t_param](double x) {
        const double scale = beta / (2.0 * kPi);
        const double damp = t_param == 0.0 ? 1.0 : std::exp(-t_param * x);
        return scale * damp * sinc_sq(0.5 * beta * x);
      },
      std::nullopt, std::move(tail));
}

namespace {

std::string format_short(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << v;
  return os.str();
}

double parse_real(std::string_view s, std::string_view what) {
  if (s == "pi") return kPi;
  std::string tmp(s);
  std::istringstream in(tmp);
  in.imbue(std::locale::classic());
  double v = 0.0;
  in >> v;
  if (in.fail() || !in.eof()) throw Error("invalid " + std::string(what) + ": '" + tmp + "'");
  return v;
}

} // namespace

Kernel parse_kernel(std::string_view id) {
  auto next = [&id]() {
    const auto pos = id.find(':');
    std::string_view head = id.substr(0, pos);
    id = pos == std::string_view::npos ? std::string_view{} : id.substr(pos + 1);
    return head;
  };
  const std::string original(id);
  const auto family = next();
  if (family == "bspline") {
    const auto ord = next();
    int order = 0;
    const auto [ptr, ec] = std::from_chars(ord.data(), ord.data() + ord.size(), order);
    if (ec != std::errc{} || ptr != ord.data() + ord.size() || !id.empty())
      throw Error("unknown kernel identifier '" + original + "'");
    return mellin_bspline(order);
  }
  if (family == "fejer") {
    const auto b = next();
    const auto t = next();
    if (b.empty() || t.empty() || !id.empty())
      throw Error("unknown kernel identifier '" + original + "'");
    return mellin_fejer(parse_real(b, "beta"), parse_real(t, "t"));
  }
  throw Error("unknown kernel identifier '" + original + "'");
}

namespace {

// Lattice index range that can touch x in [0, 1] for a kernel with compact
// support, or [-radius, 1 + radius] otherwise.
std::pair<long, long> lattice_range(const Kernel& phi, double radius) {
  if (const auto& s = phi.log_support()) {
    return {static_cast<long>(std::floor(-s->hi)) - 1, static_cast<long>(std::ceil(1.0 - s->lo)) + 1};
  }
  return {static_cast<long>(-std::ceil(radius)), static_cast<long>(std::ceil(radius)) + 1};
}

template <class F>
double scan_period(int grid, F&& at) {
  double best = -kInf;
  for (int i = 0; i < grid; ++i) best = std::max(best, at(static_cast<double>(i) / (grid - 1)));
  return best;
}

double moment_scan(const Kernel& phi, int r, int grid, double radius) {
  const auto [k0, k1] = lattice_range(phi, radius);
  return scan_period(grid, [&](double x) {
    double m = 0.0;
    for (long k = k0; k <= k1; ++k) {
      const double d = x - static_cast<double>(k);
      if (!phi.log_support() && std::abs(d) > radius) continue;
      const double v = std::abs(phi.at_log(d));
      if (v == 0.0) continue;
      m = std::max(m, v * std::pow(std::abs(d), r));
    }
    return m;
  });
}

double floor_scan(const Kernel& phi, int grid, double radius) {
  const auto [k0, k1] = lattice_range(phi, radius);
  return -scan_period(grid, [&](double x) {
    double m = -kInf;
    for (long k = k0; k <= k1; ++k) m = std::max(m, phi.at_log(x - static_cast<double>(k)));
    return -m;
  });
}

} // namespace

MomentReport discrete_abs_moment(const Kernel& phi, int r, const LatticeScanOptions& opts) {
  if (r < 0) throw Error("discrete_abs_moment: order must be >= 0");
  if (opts.grid < 2) throw Error("discrete_abs_moment: grid must be >= 2");
  MomentReport rep;
  rep.order = r;
  const int fine = 2 * opts.grid - 1;

  if (phi.log_support()) {
    const double v = moment_scan(phi, r, opts.grid, 0.0);
    const double v2 = moment_scan(phi, r, fine, 0.0);
    rep.value = v2;
    rep.est_error = std::abs(v2 - v);
    rep.method = "log-period grid " + std::to_string(opts.grid) + "/" + std::to_string(fine) +
                 ", exact lattice window";
    return rep;
  }

  // No compact support: grow the lattice radius and watch the sup.
  std::vector<double> values;
  double radius = opts.base_radius;
  for (int d = 0; d <= opts.doublings; ++d, radius *= 2.0) {
    values.push_back(moment_scan(phi, r, opts.grid, radius));
    if (values.back() > opts.ceiling) break;
  }
  const std::size_t m = values.size();
  bool growing = values.back() > opts.ceiling;
  if (!growing && m >= 4) {
    growing = true;
    for (std::size_t i = m - 3; i < m; ++i)
      if (!(values[i] > values[i - 1] * 1.01)) growing = false;
  }
  rep.method = "log-period grid " + std::to_string(opts.grid) + ", lattice radius doubled to " +
               format_short(radius / 2.0);
  if (growing) {
    rep.method += "; sup grows with the radius";
    return rep;
  }
  rep.value = values.back();
  rep.est_error = std::abs(values.back() - values[m - 2]);
  return rep;
}

MomentReport continuous_moment(const Kernel& psi, int r, bool absolute, double tol) {
  if (r < 0) throw Error("continuous_moment: order must be >= 0");
  if (!(tol > 0.0)) throw Error("continuous_moment: tol must be > 0");
  MomentReport rep;
  rep.order = r;
  const auto integrand = [&](double x) {
    const double k = psi.at_log(x);
    const double p = std::pow(x, r);
    return absolute ? std::abs(k) * std::abs(p) : k * p;
  };
  constexpr int kPanels = 64;

  if (const auto& s = psi.log_support()) {
    const auto q = integrate_log_domain(integrand, s->lo, s->hi, psi.knots(), kPanels);
    rep.value = q.value;
    rep.est_error = q.est_error;
    rep.method = "composite Simpson over the compact support";
    return rep;
  }

  // Doubling ladder T_j = cap / 2^(J-j). Increments of a convergent moment
  // shrink geometrically; non-decaying increments mean divergence.
  constexpr double kCap = 1e4;
  constexpr int kSteps = 10;
  std::vector<double> radii;
  for (int j = kSteps; j >= 0; --j) radii.push_back(kCap / std::pow(2.0, j));

  double partial = 0.0;
  double rule_err = 0.0;
  std::vector<double> inc;
  try {
    const auto q = integrate_log_domain(integrand, -radii[0], radii[0], psi.knots(), kPanels);
    partial = q.value;
    rule_err = q.est_error;
    for (std::size_t j = 1; j < radii.size(); ++j) {
      const auto left = integrate_log_domain(integrand, -radii[j], -radii[j - 1], {}, kPanels);
      const auto right = integrate_log_domain(integrand, radii[j - 1], radii[j], {}, kPanels);
      inc.push_back(left.value + right.value);
      partial += inc.back();
      rule_err += left.est_error + right.est_error;
    }
  } catch (const QuadratureError& e) {
    rep.method = std::string("integrand overflows: ") + e.what();
    rep.est_error = kInf;
    return rep;
  }

  const std::size_t m = inc.size();
  const double fixed_increment = 100.0 * tol;
  bool diverges = true;
  for (std::size_t i = m - 3; i < m; ++i) {
    const double ratio = std::abs(inc[i - 1]) > 0.0 ? std::abs(inc[i]) / std::abs(inc[i - 1]) : 0.0;
    if (!(std::abs(inc[i]) > fixed_increment && ratio > 0.9)) diverges = false;
  }
  if (diverges) {
    rep.method = "doubling ladder to T=1e4; increments do not decay (last " +
                 format_short(inc.back()) + ")";
    rep.est_error = kInf;
    return rep;
  }

  const auto& tail = psi.tail();
  double tail_part = 0.0;
  double tail_err = 0.0;
  if (r == 0 && tail && tail->has_mass_model()) {
    // Signed mass model; for a kernel that is nonnegative in its tails the
    // absolute moment uses the same value.
    tail_part = tail->mass_left(kCap) + tail->mass_right(kCap);
    tail_err = 1e-3 * std::abs(tail_part);
    rep.method = "doubling ladder to T=1e4 plus asymptotic tail mass";
  } else {
    const double a = std::abs(inc[m - 2]) > 0.0 ? inc[m - 1] / inc[m - 2] : 0.0;
    const double ratio = std::clamp(a, 0.0, 0.9);
    tail_part = inc[m - 1] * ratio / (1.0 - ratio);
    tail_err = std::abs(tail_part);
    rep.method = "doubling ladder to T=1e4 plus geometric tail extrapolation";
  }
  rep.value = partial + tail_part;
  if (absolute) rep.value = std::max(0.0, *rep.value);
  rep.est_error = rule_err + tail_err;
  return rep;
}

FloorReport phi_floor(const Kernel& phi, const LatticeScanOptions& opts,
                      double positivity_threshold) {
  if (opts.grid < 2) throw Error("phi_floor: grid must be >= 2");
  const double radius = phi.log_support() ? 0.0 : opts.base_radius;
  const double v = floor_scan(phi, opts.grid, radius);
  const double v2 = floor_scan(phi, 2 * opts.grid - 1, radius);
  FloorReport rep;
  rep.value = std::max(0.0, v2);
  rep.refinement_delta = std::abs(v2 - v);
  if (rep.value < positivity_threshold) {
    rep.value = 0.0;
    rep.underflow = true;
  }
  return rep;
}

ValidationReport validate_kernel_pair(const Kernel& phi, const Kernel& psi, double tol) {
  ValidationReport rep;
  {
    const auto m2 = discrete_abs_moment(phi, 2);
    ConditionCheck c{"(a) m_2(Phi) finite", !m2.divergent(), m2.value, m2.method};
    if (m2.divergent()) c.detail = "m_2 diverges: " + m2.method;
    rep.checks.push_back(std::move(c));
  }
  {
    const auto fl = phi_floor(phi);
    ConditionCheck c{"(b) lattice floor of Phi > 0", !fl.underflow && fl.value > 0.0, fl.value,
                     fl.underflow ? "floor underflows the positivity threshold" : ""};
    rep.checks.push_back(std::move(c));
  }
  {
    const auto m0 = continuous_moment(psi, 0, false, tol);
    ConditionCheck c{"(c) |int Psi dt/t - 1| <= tol", false, m0.value, m0.method};
    c.passed = m0.value && std::abs(*m0.value - 1.0) <= tol;
    rep.checks.push_back(std::move(c));
  }
  {
    const auto M0 = continuous_moment(psi, 0, true, tol);
    ConditionCheck c{"(d) M_0(Psi) finite", !M0.divergent(), M0.value, M0.method};
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

} // namespace expsamp
