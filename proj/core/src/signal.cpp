#include "expsamp/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace expsamp {

Signal::Signal(std::string name, Fn fn, Interval support, Interval range_bounds,
               std::vector<double> breakpoints)
    : name_(std::move(name)),
      fn_(std::make_shared<const Fn>(std::move(fn))),
      support_(support),
      range_(range_bounds),
      breakpoints_(std::move(breakpoints)) {
  if (!*fn_) throw Error("signal '" + name_ + "': empty function");
  if (!(support_.lo >= 0.0) || !(support_.lo < support_.hi))
    throw Error("signal '" + name_ + "': support must satisfy 0 <= lo < hi");
  if (!(range_.lo <= range_.hi)) throw Error("signal '" + name_ + "': invalid range bounds");
  // Support ends are breakpoints of the zero extension.
  if (support_.lo > 0.0) breakpoints_.push_back(support_.lo);
  if (std::isfinite(support_.hi)) breakpoints_.push_back(support_.hi);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

Signal constant_signal(double c) {
  std::ostringstream name;
  name.imbue(std::locale::classic());
  name << "const:" << c;
  return Signal(name.str(), [c](double) { return c; }, Interval{0.0, kInf}, Interval{c, c});
}

Signal builtin_f() {
  const double norm = std::atan(2.0);
  return Signal(
      "f",
      [norm](double u) { return std::atan((std::sin(kPi * u) + 1.0) / (1.0 + u * u)) / norm; },
      Interval{0.0, 3.0}, Interval{0.0, 1.0});
}

Signal builtin_g() {
  return Signal(
      "g",
      [](double u) {
        if (u < 1.1) return 0.1 + 0.8 / 9.0 * u * u;
        if (u < 2.0) {
          const double s = std::sin(2.0 * kPi * (u - 1.1));
          return 0.9 - 0.4 * s * s;
        }
        return 0.3 + 0.7 * (3.0 - u);
      },
      Interval{0.0, 3.0}, Interval{0.0, 1.0}, {1.1, 2.0});
}

Signal signal_from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open signal file '" + path.string() + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    ls.imbue(std::locale::classic());
    double u = 0.0;
    double v = 0.0;
    char comma = 0;
    if (!(ls >> u >> comma >> v) || comma != ',') {
      if (rows.empty() && lineno == 1) continue; // header
      throw Error("signal file '" + path.string() + "': bad row " + std::to_string(lineno));
    }
    if (!(u > 0.0)) throw Error("signal file '" + path.string() + "': u must be > 0");
    rows.emplace_back(u, v);
  }
  if (rows.size() < 2) throw Error("signal file '" + path.string() + "': needs at least two rows");
  std::sort(rows.begin(), rows.end());

  std::vector<double> xs;
  std::vector<double> vs;
  Interval range{kInf, -kInf};
  for (const auto& [u, v] : rows) {
    if (!xs.empty() && std::log(u) == xs.back())
      throw Error("signal file '" + path.string() + "': duplicate u");
    xs.push_back(std::log(u));
    vs.push_back(v);
    range.lo = std::min(range.lo, v);
    range.hi = std::max(range.hi, v);
  }

  auto fn = [xs, vs](double u) {
    const double x = std::log(u);
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    if (it == xs.begin()) return vs.front();
    if (it == xs.end()) return vs.back();
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return vs[i - 1] + w * (vs[i] - vs[i - 1]);
  };
  return Signal("file:" + path.string(), fn, Interval{rows.front().first, rows.back().first},
                range);
}

Signal parse_signal(std::string_view id) {
  if (id == "f") return builtin_f();
  if (id == "g") return builtin_g();
  if (id.starts_with("const:")) {
    const std::string text(id.substr(6));
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    double c = 0.0;
    in >> c;
    if (in.fail() || !in.eof() || !std::isfinite(c))
      throw Error("invalid constant signal '" + std::string(id) + "'");
    return constant_signal(c);
  }
  if (id.starts_with("file:")) return signal_from_csv(std::filesystem::path(std::string(id.substr(5))));
  throw Error("unknown signal '" + std::string(id) + "'");
}

namespace {

Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

std::vector<double> merged_breakpoints(const Signal& a, const Signal& b) {
  std::vector<double> out = a.breakpoints();
  out.insert(out.end(), b.breakpoints().begin(), b.breakpoints().end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Range of a signal including its zero extension.
Interval extended_range(const Signal& h) {
  return {std::min(h.range_bounds().lo, 0.0), std::max(h.range_bounds().hi, 0.0)};
}

} // namespace

Signal scaled(const Signal& h, double lambda) {
  const Interval r = h.range_bounds();
  const Interval range = lambda >= 0.0 ? Interval{lambda * r.lo, lambda * r.hi}
                                       : Interval{lambda * r.hi, lambda * r.lo};
  std::ostringstream name;
  name.imbue(std::locale::classic());
  name << lambda << "*" << h.name();
  return Signal(name.str(), [h, lambda](double u) { return lambda * h(u); }, h.support(), range,
                h.breakpoints());
}

Signal sum(const Signal& a, const Signal& b) {
  const Interval ra = extended_range(a);
  const Interval rb = extended_range(b);
  return Signal(a.name() + "+" + b.name(), [a, b](double u) { return a(u) + b(u); },
                hull(a.support(), b.support()), Interval{ra.lo + rb.lo, ra.hi + rb.hi},
                merged_breakpoints(a, b));
}

Signal abs_diff(const Signal& a, const Signal& b) {
  const Interval ra = extended_range(a);
  const Interval rb = extended_range(b);
  const double hi = std::max(std::abs(ra.hi - rb.lo), std::abs(rb.hi - ra.lo));
  return Signal("|" + a.name() + "-" + b.name() + "|",
                [a, b](double u) { return std::abs(a(u) - b(u)); }, hull(a.support(), b.support()),
                Interval{0.0, hi}, merged_breakpoints(a, b));
}

std::vector<Jump> detect_jumps(const Signal& h, double tol) {
  std::vector<Jump> out;
  for (double p : h.breakpoints()) {
    if (!(p > 0.0)) continue;
    const double eps = 1e-9 * std::max(1.0, p);
    const Jump j{p, h(p - eps), h(p + eps)};
    if (j.size() > tol) out.push_back(j);
  }
  return out;
}

Interval sampled_range(const Signal& h, int samples) {
  const double lo = std::log(std::max(h.support().lo, 1e-6));
  const double hi = std::log(std::min(h.support().hi, 1e6));
  Interval r{kInf, -kInf};
  for (int i = 0; i < samples; ++i) {
    const double x = lo + (hi - lo) * i / std::max(1, samples - 1);
    const double v = h(std::exp(x));
    r.lo = std::min(r.lo, v);
    r.hi = std::max(r.hi, v);
  }
  return r;
}

} // namespace expsamp
