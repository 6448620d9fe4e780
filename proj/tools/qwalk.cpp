// qwalk: run, compare and plot discrete-time quantum walks on the line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.

#include "qwalk/qwalk.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <random>

namespace {

using namespace qwalk;
using io::ConfigError;

constexpr int exit_ok = 0;
constexpr int exit_verification = 1;
constexpr int exit_usage = 2;

struct CommonOptions {
  std::string config;
  std::vector<std::string> methods;
  long steps = -1;
  std::string mode;
  std::string out;
  bool drop_forbidden = false;
};

void add_common(CLI::App *cmd, CommonOptions &o) {
  cmd->add_option("--config", o.config, "walk configuration (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--method", o.methods, "method name(s), comma separated")->delimiter(',');
  cmd->add_option("--steps", o.steps, "number of steps (overrides the config)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--mode", o.mode, "arithmetic mode")->check(CLI::IsMember({"exact", "adaptive", "double"}));
  cmd->add_option("--out", o.out, "output path");
}

io::WalkConfig load(const CommonOptions &o) {
  auto c = io::load_config(o.config);
  if (o.steps >= 0)
    c.steps = o.steps;
  if (!o.mode.empty())
    c.mode = parse_mode(o.mode);
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto &m : o.methods) {
      try {
        c.methods.push_back(parse_method(m));
      } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (!o.out.empty())
    c.output = o.out;
  return c;
}

Method default_method(const io::WalkConfig &c) { return c.is_mixed() ? Method::pipeline : Method::closed_form; }

/// --method, else the first method of the config, else the closed form.
Method single_method(const io::WalkConfig &c) { return c.methods.empty() ? default_method(c) : c.methods.front(); }

std::vector<Method> default_comparison(const io::WalkConfig &c) {
  if (c.is_mixed())
    return {Method::direct, Method::pipeline, Method::literal};
  return {Method::direct, Method::spectral, Method::closed_form};
}

Distribution<double> compute(const io::WalkConfig &c, Method m) {
  const ArithmeticMode mode = c.effective_mode();
  if (c.is_mixed())
    return verify::run_mixed_method(m, *c.pauli, c.steps, mode);
  return verify::run_pure_method(m, *c.pure, c.coin, c.steps, mode);
}

std::optional<long> parity_anchor(const io::WalkConfig &c) {
  return c.is_mixed() ? std::optional<long>(0) : io::support_parity_anchor(*c.pure);
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ConfigError("cannot write '" + path + "'");
  f << content;
}

std::string with_extension(const std::string &path, const std::string &ext) {
  return std::filesystem::path(path).replace_extension(ext).string();
}

// ---------------------------------------------------------------------------

int cmd_run(const CommonOptions &o) {
  auto c = load(o);
  if (o.methods.size() > 1)
    throw ConfigError("run takes a single method; use compare for several");
  const Method m = single_method(c);
  auto d = compute(c, m);
  if (o.drop_forbidden)
    d = io::drop_forbidden_sites(d, parity_anchor(c));
  const std::string csv = io::to_csv(d);
  if (c.output.empty()) {
    std::cout << csv;
    return exit_ok;
  }
  write_file(with_extension(c.output, ".csv"), csv);
  write_file(with_extension(c.output, ".json"), io::dump_json(io::distribution_to_json(d)));
  return exit_ok;
}

int cmd_compare(const CommonOptions &o, bool strict, bool expect_discrepancy, bool timings) {
  auto c = load(o);
  auto methods = c.methods.empty() ? default_comparison(c) : c.methods;
  if (methods.size() < 2)
    throw ConfigError("compare needs at least two methods");
  verify::ComparisonReport rep;
  try {
    rep = c.is_mixed() ? verify::compare_mixed(*c.pauli, c.steps, methods, c.effective_mode())
                       : verify::compare_pure(*c.pure, c.coin, c.steps, methods, c.effective_mode());
  } catch (const std::invalid_argument &e) {
    throw ConfigError(e.what());
  }
  rep.config["source"] = io::config_to_json(c);
  const std::string text = io::dump_json(rep.to_json(timings));
  if (c.output.empty())
    std::cout << text;
  else
    write_file(c.output, text);
  for (const auto &f : rep.failures())
    std::cerr << (f.advisory ? "discrepancy: " : "failure: ") << f.module << ": " << f.name << " (" << f.detail
              << ")\n";
  if (!rep.passed(strict))
    return exit_verification;
  if (expect_discrepancy && !rep.has_discrepancy()) {
    std::cerr << "failure: expected a deviation of the printed mixed-state formula, none found\n";
    return exit_verification;
  }
  return exit_ok;
}

struct FtOptions {
  std::string kind = "quad";
  std::vector<double> coeffs;
  long t_max = 20;
  std::string out;
  std::uint64_t seed = 1;
};

int cmd_ft_table(const FtOptions &o) {
  const std::size_t degree = o.kind == "quad" ? 2 : 4;
  std::vector<double> c = o.coeffs;
  if (c.empty()) {
    std::mt19937_64 gen(o.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < degree; ++i)
      c.push_back(u(gen));
  }
  if (c.size() != degree)
    throw ConfigError("--coeffs needs " + std::to_string(degree) + " values for --kind " + o.kind);

  // explicit sums at 256 bits so the table shows recurrence error, not cancellation
  PrecisionScope scope(256);
  std::vector<mp_real> cm;
  for (double v : c)
    cm.emplace_back(v);
  std::ostringstream os;
  os << "t,explicit,recurrence,abs_diff\n";
  auto row = [&](long t, double explicit_v, double rec) {
    os << t << ',' << io::format_double(explicit_v) << ',' << io::format_double(rec) << ','
       << io::format_double(std::abs(explicit_v - rec)) << '\n';
  };
  if (degree == 2) {
    const auto seq = HornerSequence<double>::quad({c[0], c[1]}, o.t_max);
    for (long t = 0; t <= o.t_max; ++t)
      row(t, f_quad(CharPolyQuad<mp_real>{cm[0], cm[1]}, t).to_double(), seq(t));
  } else {
    const auto seq = HornerSequence<double>::quartic({{c[0], c[1], c[2], c[3]}}, o.t_max);
    for (long t = 0; t <= o.t_max; ++t)
      row(t, f_quartic(CharPolyQuartic<mp_real>{{cm[0], cm[1], cm[2], cm[3]}}, t).to_double(), seq(t));
  }
  if (o.out.empty())
    std::cout << os.str();
  else
    write_file(o.out, os.str());
  return exit_ok;
}

int cmd_plot_data(const CommonOptions &o, const std::string &format) {
  auto c = load(o);
  if (o.methods.size() > 1)
    throw ConfigError("plot-data takes a single method");
  const Method m = single_method(c);
  auto d = compute(c, m);
  if (o.drop_forbidden)
    d = io::drop_forbidden_sites(d, parity_anchor(c));
  const std::string base = c.output.empty() ? "qwalk_plot" : c.output;
  const std::string title = "t = " + std::to_string(d.t) + ", " + to_string(d.method) + ", " + to_string(d.mode);
  if (format == "svg" || format == "both") {
    std::ostringstream os;
    io::write_svg(os, d, title);
    write_file(with_extension(base, ".svg"), os.str());
  }
  if (format == "dat" || format == "both") {
    std::ostringstream os;
    io::write_gnuplot(os, d);
    write_file(with_extension(base, ".dat"), os.str());
  }
  return exit_ok;
}

int cmd_suite(std::uint64_t seed, const std::string &out, bool quick, bool timings) {
  verify::SuiteSizes sizes;
  if (quick) {
    sizes.pure_draws = 10;
    sizes.horner_draws = 20;
    sizes.mixed_draws = 20;
    sizes.identity_draws = 5;
  }
  const auto rep = verify::run_invariant_suite(seed, sizes);
  const std::string text = io::dump_json(rep.to_json(timings));
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  for (const auto &f : rep.failures())
    std::cerr << (f.advisory ? "discrepancy: " : "failure: ") << f.module << ": " << f.name << " (" << f.detail
              << ")\n";
  return rep.passed() ? exit_ok : exit_verification;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Discrete-time quantum walks on the line"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto *run = app.add_subcommand("run", "compute one distribution and write CSV and JSON");
  add_common(run, run_opts);
  run->add_flag("--drop-forbidden-sites", run_opts.drop_forbidden, "omit zero-probability parity-forbidden sites");

  CommonOptions cmp_opts;
  bool strict = false, expect_discrepancy = false, cmp_timings = false;
  auto *cmp = app.add_subcommand("compare", "cross-check several methods and write a JSON report");
  add_common(cmp, cmp_opts);
  cmp->add_flag("--strict", strict, "treat deviations of the printed mixed-state formula as failures");
  cmp->add_flag("--expect-discrepancy", expect_discrepancy,
                "fail unless the printed mixed-state formula deviates from the oracle");
  cmp->add_flag("--timings", cmp_timings, "record wall-clock timings in the report");

  FtOptions ft_opts;
  auto *ft = app.add_subcommand("ft-table", "tabulate f_t by explicit sum and by recurrence");
  ft->add_option("--kind", ft_opts.kind, "polynomial degree")->check(CLI::IsMember({"quad", "quartic"}));
  ft->add_option("--coeffs", ft_opts.coeffs, "c0,c1[,c2,c3]")->delimiter(',');
  ft->add_option("--t-max", ft_opts.t_max, "largest t")->check(CLI::NonNegativeNumber);
  ft->add_option("--out", ft_opts.out, "output CSV path");
  ft->add_option("--seed", ft_opts.seed, "seed for random coefficients when --coeffs is absent");

  CommonOptions plot_opts;
  std::string plot_format = "both";
  auto *plot = app.add_subcommand("plot-data", "write an SVG plot and a gnuplot data file");
  add_common(plot, plot_opts);
  plot->add_flag("--drop-forbidden-sites", plot_opts.drop_forbidden, "omit zero-probability parity-forbidden sites");
  plot->add_option("--format", plot_format, "svg, dat or both")->check(CLI::IsMember({"svg", "dat", "both"}));

  std::uint64_t suite_seed = 20240601;
  std::string suite_out;
  bool suite_quick = false, suite_timings = false;
  auto *suite = app.add_subcommand("suite", "run the invariant suite");
  suite->add_option("--seed", suite_seed, "generator seed");
  suite->add_option("--out", suite_out, "report path");
  suite->add_flag("--quick", suite_quick, "smaller sample sizes");
  suite->add_flag("--timings", suite_timings, "record wall-clock timings in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*run)
      return cmd_run(run_opts);
    if (*cmp)
      return cmd_compare(cmp_opts, strict, expect_discrepancy, cmp_timings);
    if (*ft)
      return cmd_ft_table(ft_opts);
    if (*plot)
      return cmd_plot_data(plot_opts, plot_format);
    if (*suite)
      return cmd_suite(suite_seed, suite_out, suite_quick, suite_timings);
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::domain_error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
