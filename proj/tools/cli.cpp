#include "cli.hpp"

#include "expsamp/analysis.hpp"
#include "expsamp/kernels.hpp"
#include "expsamp/report_io.hpp"
#include "expsamp/svg_plot.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace expsamp::cli {

namespace {

// Raw flag text, converted to a RunConfig after CLI11 has split the line.
struct Flags {
  std::string phi = "bspline:2";
  std::string psi = "fejer:pi:0";
  std::string op = "max-product";
  std::string signal = "f";
  std::string n = "5,10,15,20";
  std::string z = "0.3,0.8,1.5,2.2,2.8";
  std::string z_grid;
  std::string domain = "auto";
  double quad_tol = 1e-9;
  std::string out;
  std::string format = "csv";
  double tol = 1e-8;
};

void add_run_flags(CLI::App& app, Flags& f) {
  app.add_option("--phi", f.phi, "Sampling kernel: bspline:<order> or fejer:<beta>:<t>");
  app.add_option("--psi", f.psi, "Integral kernel, same syntax as --phi");
  app.add_option("--op", f.op, "max-product, max-min, linear or kantorovich (comma list)");
  app.add_option("--signal", f.signal, "f, g, const:<c> or file:<path>");
  app.add_option("--n", f.n, "Comma list of n");
  app.add_option("--z", f.z, "Comma list of z");
  app.add_option("--z-grid", f.z_grid, "lo:hi:count, overrides --z");
  app.add_option("--domain", f.domain, "auto, full or lo:hi");
  app.add_option("--quad-tol", f.quad_tol, "Quadrature accuracy target");
  app.add_option("--out", f.out, "Output file");
  app.add_option("--format", f.format, "csv or svg");
}

RunConfig to_config(const Flags& f) {
  RunConfig c;
  c.phi = f.phi;
  c.psi = f.psi;
  c.operators = parse_operator_list(f.op);
  c.signal = f.signal;
  c.n_list = parse_int_list(f.n);
  c.z_list = parse_real_list(f.z);
  if (!f.z_grid.empty()) c.z_grid = parse_z_grid(f.z_grid);
  c.domain = parse_domain(f.domain);
  if (!(f.quad_tol > 0.0)) throw Error("--quad-tol must be > 0");
  c.quad_tol = f.quad_tol;
  if (!f.out.empty()) c.out = f.out;
  c.format = parse_format(f.format);
  // Identifiers are checked here so that typos are usage errors.
  (void)parse_kernel(c.phi);
  (void)parse_kernel(c.psi);
  if (!(c.signal == "f" || c.signal == "g" || c.signal.starts_with("const:") ||
        c.signal.starts_with("file:")))
    throw Error("unknown signal '" + c.signal + "'");
  if (c.signal.starts_with("const:")) (void)parse_signal(c.signal);
  return c;
}

// Writes `text` to path, or to `out` when path is empty.
bool emit(const std::optional<std::string>& path, const std::string& text, std::ostream& out,
          std::ostream& err) {
  if (!path) {
    out << text;
    return true;
  }
  std::ofstream f(*path, std::ios::binary);
  f << text;
  f.close();
  if (!f) {
    err << "error: cannot write '" << *path << "'\n";
    return false;
  }
  return true;
}

bool report_failures(const ErrorReport& r, std::ostream& err) {
  bool any = false;
  for (const auto& c : r.cells) {
    if (!c.failure) continue;
    err << "error: " << r.operator_name << " at z=" << format_g6(c.z) << " n=" << c.n << ": "
        << *c.failure << '\n';
    any = true;
  }
  return any;
}

std::vector<ErrorReport> run_reports(const RunConfig& c, const Signal& h) {
  const auto z = c.z_values();
  std::vector<ErrorReport> reps;
  for (auto kind : c.operators)
    reps.push_back(pointwise_errors(kind, h, z, c.n_list, c.make_params(c.n_list.front())));
  return reps;
}

int cmd_validate(const RunConfig& c, double tol, std::ostream& out) {
  const auto rep = validate_kernel_pair(parse_kernel(c.phi), parse_kernel(c.psi), tol);
  for (const auto& chk : rep.checks) {
    out << (chk.passed ? "PASS " : "FAIL ") << chk.name;
    if (chk.measured) out << " measured=" << format_real(*chk.measured);
    if (!chk.detail.empty()) out << " (" << chk.detail << ")";
    out << '\n';
  }
  return rep.all_passed() ? kExitOk : kExitFailure;
}

int cmd_table(const RunConfig& c, bool with_operator, std::ostream& out, std::ostream& err) {
  const Signal h = parse_signal(c.signal);
  const auto reps = run_reports(c, h);
  std::ostringstream csv;
  if (reps.size() == 1 && !with_operator)
    write_error_csv(csv, reps.front());
  else
    write_multi_error_csv(csv, reps);
  bool failed = false;
  for (const auto& r : reps) failed = report_failures(r, err) || failed;
  if (!emit(c.out, csv.str(), out, err)) return kExitFailure;
  return failed ? kExitFailure : kExitOk;
}

int cmd_plot(const RunConfig& c, bool format_given, std::ostream& out, std::ostream& err) {
  if (c.n_list.empty()) throw Error("plot needs at least one n");
  const bool svg = format_given ? c.format == OutputFormat::Svg : true;
  const Signal h = parse_signal(c.signal);
  const auto reps = run_reports(c, h);
  bool failed = false;
  for (const auto& r : reps) failed = report_failures(r, err) || failed;

  std::ostringstream csv;
  write_multi_error_csv(csv, reps);
  if (!svg) {
    if (!emit(c.out, csv.str(), out, err)) return kExitFailure;
    return failed ? kExitFailure : kExitOk;
  }

  const auto z = c.z_values();
  std::vector<Curve> curves;
  Curve exact{h.name(), z, {}};
  for (double zi : z) exact.y.push_back(h(zi));
  curves.push_back(exact);
  for (const auto& r : reps) {
    for (std::size_t ni = 0; ni < r.n_values.size(); ++ni) {
      Curve cv;
      cv.label = (reps.size() > 1 ? r.operator_name + " " : std::string()) + "n=" +
                 std::to_string(r.n_values[ni]);
      for (std::size_t zi = 0; zi < z.size(); ++zi) {
        cv.x.push_back(z[zi]);
        cv.y.push_back(r.at(zi, ni).approx);
      }
      curves.push_back(std::move(cv));
    }
  }
  PlotStyle style;
  style.title = h.name() + ": " + reps.front().operator_name +
                (reps.size() > 1 ? " vs " + reps.back().operator_name : std::string());
  const std::string svg_text = render_svg(curves, style);
  if (!c.out) {
    out << svg_text;
    return failed ? kExitFailure : kExitOk;
  }
  std::filesystem::path sibling(*c.out);
  sibling.replace_extension(".csv");
  if (!emit(c.out, svg_text, out, err)) return kExitFailure;
  if (!emit(sibling.string(), csv.str(), out, err)) return kExitFailure;
  return failed ? kExitFailure : kExitOk;
}

int cmd_converge(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const Signal h = parse_signal(c.signal);
  const auto reps = run_reports(c, h);
  bool failed = false;
  std::ostringstream csv;
  for (const auto& r : reps) {
    if (report_failures(r, err)) {
      failed = true;
      continue;
    }
    const auto est = estimate_rate(r);
    out << r.operator_name << ' ' << r.signal_name << ": ";
    if (est.undefined())
      out << "slope undefined (zero error)\n";
    else
      out << "slope=" << format_g6(*est.slope) << " r2=" << format_g6(est.r_squared) << '\n';
    if (reps.size() > 1) csv << "# " << r.operator_name << '\n';
    write_rate_csv(csv, est);
  }
  if (c.out && !emit(c.out, csv.str(), out, err)) return kExitFailure;
  return failed ? kExitFailure : kExitOk;
}

} // namespace

RunConfig parse_run_config(const std::vector<std::string>& args) {
  CLI::App app("expsamp run flags");
  Flags f;
  add_run_flags(app, f);
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    throw Error(e.what());
  }
  return to_config(f);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Max-product and max-min Durrmeyer exponential sampling", "expsamp");
  app.require_subcommand(1);
  Flags f;
  struct Sub {
    CLI::App* app;
    CLI::Option* format;
  };
  std::vector<Sub> subs;
  for (const char* name : {"validate", "eval", "table", "plot", "converge"}) {
    static const std::map<std::string, std::string> help{
        {"validate", "Check the admissibility conditions of a kernel pair"},
        {"eval", "Evaluate operators at the given z and n"},
        {"table", "Pointwise error table as CSV"},
        {"plot", "SVG of the signal and its approximations, with a CSV of the samples"},
        {"converge", "Empirical convergence rate over n"}};
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_run_flags(*sub, f);
    if (std::string(name) == "validate")
      sub->add_option("--tol", f.tol, "Tolerance on the unit integral of Psi");
    subs.push_back({sub, sub->get_option("--format")});
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  RunConfig config;
  try {
    config = to_config(f);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto chosen = std::find_if(subs.begin(), subs.end(), [](const Sub& s) { return s.app->parsed(); });
  const std::string cmd = chosen->app->get_name();
  try {
    if (cmd == "validate") return cmd_validate(config, f.tol, out);
    if (cmd == "plot") return cmd_plot(config, chosen->format->count() > 0, out, err);
    if (cmd == "converge") return cmd_converge(config, out, err);
    return cmd_table(config, cmd == "eval", out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

} // namespace expsamp::cli
