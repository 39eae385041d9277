// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

#include <expsamp/analysis.hpp>
#include <expsamp/kernels.hpp>
#include <expsamp/operators.hpp>
#include <expsamp/signal.hpp>

#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace expsamp;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Collects the first few violations of a criterion.
class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    std::lock_guard lock(mu_);
    ++failures_;
    if (examples_.size() < 3) examples_.push_back(what);
  }
  [[nodiscard]] Outcome outcome(const std::string& extra = {}) const {
    std::ostringstream os;
    os << checks_.load() << " checks, " << failures_ << " failed";
    if (!extra.empty()) os << "; " << extra;
    for (const auto& e : examples_) os << "; " << e;
    return {failures_ == 0, os.str()};
  }
  [[nodiscard]] long checks() const { return checks_; }

 private:
  std::atomic<long> checks_{0};
  long failures_ = 0;
  std::vector<std::string> examples_;
  mutable std::mutex mu_;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const Interval kTableDomain{0.1, 3.0};
const std::array<double, 5> kTableZ{0.3, 0.8, 1.5, 2.2, 2.8};
const std::array<int, 4> kTableN{5, 10, 15, 20};

using Printed = std::array<std::array<double, 4>, 5>;

// Pointwise absolute errors as printed in the reference tables.
const Printed kMaxProductF{{{0.013047, 0.006167, 0.003983, 0.002951},
                            {0.054074, 0.038152, 0.032861, 0.030167},
                            {0.08393, 0.041165, 0.027289, 0.020454},
                            {0.029278, 0.010613, 0.005212, 0.002913},
                            {0.046903, 0.030925, 0.027645, 0.010275}}};
const Printed kMaxMinF{{{0.036776, 0.018713, 0.012502, 0.009253},
                        {0.070915, 0.046449, 0.038353, 0.01103},
                        {0.081093, 0.056877, 0.034616, 0.024386},
                        {0.042393, 0.019329, 0.011395, 0.007278},
                        {0.010219, 0.00813, 0.016618, 0.019043}}};
const Printed kMaxProductG{{{0.00548, 0.00270, 0.00171, 0.00132},
                            {0.02673, 0.01842, 0.01344, 0.00967},
                            {0.10118, 0.05965, 0.04769, 0.04039},
                            {0.15006, 0.05942, 0.04307, 0.04060},
                            {0.14416, 0.08171, 0.06752, 0.01667}}};
const Printed kMaxMinG{{{0.00254, 0.00119, 0.00070, 0.00058},
                        {0.02191, 0.01620, 0.01203, 0.00862},
                        {0.12352, 0.07252, 0.05660, 0.04696},
                        {0.19429, 0.08987, 0.06406, 0.05570},
                        {0.01671, 0.01959, 0.03778, 0.04121}}};

Outcome tables() {
  struct Case {
    const char* name;
    OperatorKind op;
    Signal h;
    const Printed& printed;
  };
  const std::vector<Case> cases{{"max-product f", OperatorKind::MaxProduct, builtin_f(), kMaxProductF},
                                {"max-min f", OperatorKind::MaxMin, builtin_f(), kMaxMinF},
                                {"max-product g", OperatorKind::MaxProduct, builtin_g(), kMaxProductG},
                                {"max-min g", OperatorKind::MaxMin, builtin_g(), kMaxMinG}};
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  std::string summary;
  for (const auto& c : cases) {
    const auto rep = pointwise_errors(c.op, c.h, kTableZ, kTableN, fixtures::default_pair_params(5, kTableDomain));
    int tight = 0;
    double worst = 0.0;
    for (std::size_t zi = 0; zi < kTableZ.size(); ++zi) {
      for (std::size_t ni = 0; ni < kTableN.size(); ++ni) {
        const auto& cell = rep.at(zi, ni);
        const double diff = std::abs(cell.abs_error - c.printed[zi][ni]);
        worst = std::max(worst, cell.failure ? 1.0 : diff);
        if (diff <= 2e-3) ++tight;
        t.check(!cell.failure && diff <= 5e-3,
                std::string(c.name) + fmt(" z=%g n=%g got %.6f printed %.6f", cell.z, cell.n,
                                          cell.abs_error, c.printed[zi][ni]));
      }
    }
    t.check(tight >= 16, std::string(c.name) + fmt(": only %g/20 cells within 2e-3", tight));
    summary += std::string(summary.empty() ? "" : ", ") + c.name + fmt(" max diff %.1e", worst);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  t.check(secs < 60.0, fmt("took %.1f s", secs));
  return t.outcome(summary + fmt(", %.2f s", secs));
}

Outcome constants() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> zdist(0.1, 3.0);
  std::vector<double> zs(50);
  for (auto& z : zs) z = zdist(rng);
  struct Job {
    double c;
    double z;
    int n;
    OperatorKind op;
  };
  std::vector<Job> jobs;
  for (double c : {0.0, 0.25, 1.0})
    for (double z : zs)
      for (int n : {5, 20})
        for (auto op : {OperatorKind::MaxProduct, OperatorKind::MaxMin}) jobs.push_back({c, z, n, op});
  Tally t;
  std::vector<double> dev(jobs.size(), 0.0);
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const OperatorParams p(j.n, mellin_bspline(2), mellin_fejer(oracle::pi, 0.0));
    try {
      const double v = apply_operator(j.op, constant_signal(j.c), j.z, p);
      dev[i] = std::abs(v - j.c);
      t.check(dev[i] <= 1e-6, std::string(to_string(j.op)) + fmt(" c=%g z=%.4f n=%g got %.9f", j.c, j.z, j.n, v));
    } catch (const Error& e) {
      t.check(false, e.what());
    }
  });
  return t.outcome(fmt("max deviation %.2e", *std::max_element(dev.begin(), dev.end())));
}

Outcome admissibility() {
  Tally t;
  const Kernel b2 = mellin_bspline(2);
  const Kernel fejer = mellin_fejer(oracle::pi, 0.0);
  const auto rep = validate_kernel_pair(b2, fejer);
  for (const auto& c : rep.checks) t.check(c.passed, "validate " + c.name + " failed");
  t.check(rep.checks.size() == 4, "expected four conditions");

  const auto integral = continuous_moment(fejer, 0, false);
  t.check(integral.value && std::abs(*integral.value - 1.0) <= 1e-8,
          fmt("int F dt/t = %.12f", integral.value.value_or(NAN)));

  const double floor_lib = phi_floor(b2).value;
  const double floor_ref = oracle::lattice_floor(oracle::b2, 10001, 3);
  t.check(std::abs(floor_lib - 0.5) <= 1e-6 && std::abs(floor_ref - 0.5) <= 1e-6,
          fmt("floor %.9f (oracle %.9f)", floor_lib, floor_ref));

  const std::array<double, 3> expected{1.0, 0.25, 4.0 / 27.0};
  std::string values;
  for (int r = 0; r <= 2; ++r) {
    const auto m = discrete_abs_moment(b2, r);
    const double ref = oracle::lattice_moment(oracle::b2, r, 30001, 3);
    const double got = m.value.value_or(NAN);
    t.check(std::abs(got - expected[r]) <= 1e-6 && std::abs(ref - expected[r]) <= 1e-6,
            fmt("m_%g = %.9f (oracle %.9f)", r, got, ref));
    values += fmt(" m%g=%.9f", r, got);
  }
  return t.outcome(fmt("int F = 1%+.1e, floor=%.9f", integral.value.value_or(NAN) - 1.0, floor_lib) + values);
}

Outcome divergence() {
  Tally t;
  const auto m1 = continuous_moment(mellin_fejer(oracle::pi, 0.0), 1, true);
  t.check(m1.divergent(), fmt("M_1 reported finite: %.6g", m1.value.value_or(NAN)));
  const auto b2 = continuous_moment(mellin_bspline(2), 1, true);
  t.check(b2.value && std::abs(*b2.value - 1.0 / 3.0) <= 1e-8, "M_1(B_2) should be 1/3");
  return t.outcome(m1.method);
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> zdist(0.3, 2.8);
  std::uniform_int_distribution<int> ndist(3, 25);
  std::uniform_int_distribution<int> sdist(0, 2);
  struct Triple {
    OperatorKind op;
    double z;
    int n;
    int which;
    oracle::Pwl pwl;
  };
  std::vector<Triple> triples;
  for (auto op : {OperatorKind::MaxProduct, OperatorKind::MaxMin})
    for (int i = 0; i < 25; ++i) {
      Triple tr{op, zdist(rng), ndist(rng), sdist(rng), {}};
      tr.pwl = oracle::random_pwl(rng, 9, 0.0, 1.0);
      triples.push_back(tr);
    }

  Tally t;
  std::vector<double> diffs(triples.size(), 0.0);
  const oracle::Setup setup = fixtures::bspline_fejer_setup();
  parallel_for(triples.size(), [&](std::size_t i) {
    const Triple& tr = triples[i];
    std::function<double(double)> href;
    std::vector<double> breaks;
    Signal h = builtin_f();
    if (tr.which == 0) {
      href = oracle::f_ref;
    } else if (tr.which == 1) {
      href = oracle::g_ref;
      h = builtin_g();
      breaks = {1.1, 2.0};
    } else {
      href = tr.pwl;
      h = fixtures::to_signal(tr.pwl);
      breaks = tr.pwl.nodes();
    }
    const auto op = tr.op == OperatorKind::MaxProduct ? oracle::Op::MaxProduct : oracle::Op::MaxMin;
    const double got = apply_operator(tr.op, h, tr.z, fixtures::default_pair_params(tr.n, kTableDomain));
    const double ref = oracle::wide_window_operator(op, setup, href, tr.z, tr.n, 0.1, 3.0, breaks);
    diffs[i] = std::abs(got - ref);
    t.check(diffs[i] <= 1e-6, std::string(to_string(tr.op)) +
                                  fmt(" signal#%g z=%.4f n=%g diff %.2e", tr.which, tr.z, tr.n, diffs[i]));
  });
  return t.outcome(fmt("max diff %.2e", *std::max_element(diffs.begin(), diffs.end())));
}

Outcome lattice_properties() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> wide(0.0, 100.0);
  std::uniform_int_distribution<int> len(1, 12);
  Tally t;
  constexpr int kTuples = 10000;
  for (int i = 0; i < kTuples; ++i) {
    const int m = len(rng);
    std::vector<double> s(m);
    std::vector<double> u(m);
    std::vector<double> d(m);
    for (int j = 0; j < m; ++j) {
      s[j] = wide(rng) - 50.0;
      u[j] = wide(rng) - 50.0;
      d[j] = std::abs(s[j] - u[j]);
    }
    t.check(sup_over(s) - sup_over(u) <= sup_over(d), "sup(s) - sup(t) <= sup|s - t|");
  }
  for (int i = 0; i < kTuples; ++i) {
    const double r = unit(rng);
    const double p = unit(rng);
    const double q = unit(rng);
    t.check(std::abs(min_pair(r, p) - min_pair(r, q)) <= min_pair(r, std::abs(p - q)),
            fmt("|(r^p)-(r^q)| <= r^|p-q| at %g %g %g", r, p, q));
  }
  for (int i = 0; i < kTuples; ++i) {
    const double r = wide(rng);
    const double p = wide(rng);
    const double q = wide(rng);
    t.check(min_pair(r, q) + min_pair(p, q) >= min_pair(r + p, q),
            fmt("(r^q)+(p^q) >= (r+p)^q at %g %g %g", r, p, q));
  }
  for (int i = 0; i < kTuples; ++i) {
    const int m = len(rng);
    const double lambda = wide(rng);
    std::vector<double> mins(m);
    std::vector<double> scaled_mins(m);
    for (int j = 0; j < m; ++j) {
      const double a = unit(rng);
      const double b = unit(rng);
      mins[j] = min_pair(a, b);
      scaled_mins[j] = min_pair(lambda * a, lambda * b);
    }
    t.check(lambda * sup_over(mins) == sup_over(scaled_mins), fmt("scaling at lambda %g", lambda));
  }
  return t.outcome();
}

Outcome operator_properties() {
  const Interval domain{0.2, 4.0};
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> zdist(0.3, 3.5);
  std::uniform_int_distribution<int> ndist(3, 20);
  struct Pair {
    Signal h;
    Signal g;
    int n;
    std::vector<double> zs;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < 200; ++i) {
    Pair p{fixtures::to_signal(oracle::random_pwl(rng, 7, 0.0, 0.5), "h"),
           fixtures::to_signal(oracle::random_pwl(rng, 10, 0.0, 0.5), "g"), ndist(rng), {}};
    for (int j = 0; j < 10; ++j) p.zs.push_back(zdist(rng));
    pairs.push_back(std::move(p));
  }

  Tally t;
  constexpr double kAbs = 1e-9;
  parallel_for(pairs.size(), [&](std::size_t i) {
    const Pair& pr = pairs[i];
    const auto params = fixtures::default_pair_params(pr.n, domain);
    const Signal hg = sum(pr.h, pr.g);
    const Signal diff = abs_diff(pr.h, pr.g);
    for (double z : pr.zs) {
      const std::string where = fmt(" (pair %g z=%.4f n=%g)", static_cast<double>(i), z, pr.n);
      for (auto op : {OperatorKind::MaxProduct, OperatorKind::MaxMin}) {
        const std::string name(to_string(op));
        const double vh = apply_operator(op, pr.h, z, params);
        const double vg = apply_operator(op, pr.g, z, params);
        const double vhg = apply_operator(op, hg, z, params);
        const double vd = apply_operator(op, diff, z, params);
        t.check(vh <= vhg + kAbs, name + " monotonicity h <= h+g" + where);
        t.check(vhg <= vh + vg + kAbs, name + " subadditivity" + where);
        t.check(std::abs(vh - vg) <= vd + kAbs, name + " contraction" + where);
        if (op == OperatorKind::MaxMin) {
          for (double v : {vh, vg, vhg, vd})
            t.check(v >= -1e-6 && v <= 1.0 + 1e-6, "max-min bounds" + where);
        } else {
          for (double lambda : {0.5, 2.0, 10.0}) {
            const double vl = apply_operator(op, scaled(pr.h, lambda), z, params);
            t.check(std::abs(vl - lambda * vh) <= 1e-9 * std::max(std::abs(lambda * vh), 1e-300),
                    fmt("homogeneity lambda=%g", lambda) + where);
          }
        }
      }
    }
  });
  return t.outcome();
}

Outcome rate_bound() {
  const Kernel b2 = mellin_bspline(2);
  const RateBoundInputs in = rate_bound_inputs(b2, b2);
  const Signal f = builtin_f();
  std::vector<double> zs;
  for (int i = 0; i < 20; ++i) zs.push_back(0.3 + 2.5 * i / 19.0);
  const std::vector<int> ns{5, 10, 20};
  const OperatorParams params(5, b2, b2);
  const auto rep = pointwise_errors(OperatorKind::MaxProduct, f, zs, ns, params);
  Tally t;
  double min_margin = 1e300;
  for (std::size_t ni = 0; ni < ns.size(); ++ni) {
    const auto bound = optimal_rate_bound_maxproduct(f, in, ns[ni]);
    t.check(!bound.divergent(), fmt("bound divergent at n=%g", ns[ni]));
    if (bound.divergent()) continue;
    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
      const auto& cell = rep.at(zi, ni);
      t.check(!cell.failure && cell.abs_error <= *bound.value,
              fmt("z=%.4f n=%g error %.6f bound %.6f", cell.z, cell.n, cell.abs_error, *bound.value));
      if (!cell.failure) min_margin = std::min(min_margin, *bound.value - cell.abs_error);
    }
  }
  return t.outcome(fmt("smallest margin %.4f", min_margin));
}

Outcome empirical_rate() {
  const std::vector<int> ns{5, 10, 20, 40, 80};
  std::vector<double> zs;
  for (int i = 0; i < 20; ++i) zs.push_back(0.3 + 2.5 * i / 19.0);
  Tally t;
  std::string summary;
  for (auto op : {OperatorKind::MaxProduct, OperatorKind::MaxMin}) {
    const auto rep = pointwise_errors(op, builtin_f(), zs, ns, fixtures::default_pair_params(5, kTableDomain));
    const auto est = estimate_rate(rep);
    const std::string name(to_string(op));
    t.check(est.slope && *est.slope <= -0.3, name + fmt(" slope %.4f", est.slope.value_or(NAN)));
    t.check(est.r_squared >= 0.9, name + fmt(" r2 %.4f", est.r_squared));
    summary += (summary.empty() ? "" : ", ") + name + fmt(" slope %.3f r2 %.3f", est.slope.value_or(NAN), est.r_squared);
  }
  return t.outcome(summary);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Tally t;
  const auto dir = std::filesystem::temp_directory_path() / "expsamp_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> runs{
      {"table", "--signal", "g", "--op", "max-min"},
      {"table"},
      {"plot", "--z-grid", "0.05:3:301", "--n", "5,10,15,20"},
      {"plot", "--signal", "g", "--op", "max-product,max-min", "--n", "10", "--z-grid", "0.1:3:120"}};
  int idx = 0;
  for (const auto& base : runs) {
    std::array<std::string, 2> text;
    std::array<std::string, 2> side;
    for (int rep = 0; rep < 2; ++rep) {
      auto args = base;
      const auto out = dir / ("run" + std::to_string(idx) + "_" + std::to_string(rep) + (base[0] == "plot" ? ".svg" : ".csv"));
      args.push_back("--out");
      args.push_back(out.string());
      std::ostringstream so;
      std::ostringstream se;
      const int code = cli::run_cli(args, so, se);
      t.check(code == cli::kExitOk, "run " + std::to_string(idx) + " exited " + std::to_string(code) + ": " + se.str());
      text[rep] = slurp(out);
      if (base[0] == "plot") {
        auto csv = out;
        csv.replace_extension(".csv");
        side[rep] = slurp(csv);
      }
    }
    t.check(!text[0].empty() && text[0] == text[1], "output of run " + std::to_string(idx) + " differs");
    t.check(side[0] == side[1], "sample CSV of run " + std::to_string(idx) + " differs");
    ++idx;
  }
  std::filesystem::remove_all(dir);
  return t.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"table reproduction", tables},
      {"constant reproduction", constants},
      {"kernel admissibility", admissibility},
      {"divergence detection", divergence},
      {"oracle equivalence", oracle_equivalence},
      {"lattice properties", lattice_properties},
      {"operator properties", operator_properties},
      {"rate bound dominates error", rate_bound},
      {"empirical rate", empirical_rate},
      {"determinism", determinism}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].name << " ["
              << o.detail << "] " << fmt("(%.1f s)", secs) << std::endl;
    if (!o.passed) ++failed;
  }
  std::cout << (failed == 0 ? "ALL PASS" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
