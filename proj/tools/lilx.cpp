// Command-line front end: parses flags into a RunConfig, runs the command,
// and writes the report. Exit codes: 0 success, 1 numerical failure,
// 2 usage error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "lilx/commands.hpp"
#include "lilx/errors.hpp"

namespace {

using namespace lilx;

struct Common {
  std::string format = "csv";
  std::string output;
  std::string svg;
  bool timing = false;
  std::string sided = "one";
  std::uint64_t seed = 42;
};

void add_common(CLI::App* sub, Common& c, bool sided = true) {
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output", c.output,
                  "report file (relative paths resolve under $LILX_OUTPUT_DIR when set)");
  sub->add_option("--svg", c.svg, "also write an SVG plot");
  sub->add_flag("--timing", c.timing, "record wall time (makes reports run-dependent)");
  if (sided) {
    sub->add_option("--sided", c.sided, "one or two")->check(CLI::IsMember({"one", "two"}));
  }
}

struct Ladder {
  std::string ln_n;
  std::string log10_n;
  std::optional<double> single_ln_n;
  std::optional<double> single_n;
};

void add_ladder(CLI::App* sub, Ladder& l) {
  auto* a = sub->add_option("--ln-n-ladder", l.ln_n, "comma-separated ln n values");
  auto* b = sub->add_option("--log10-n-ladder", l.log10_n, "comma-separated log10 n values");
  auto* c = sub->add_option("--ln-n", l.single_ln_n, "a single index given as ln n (any real > 1)");
  auto* d = sub->add_option("--n", l.single_n, "a single integer index n <= 1e15");
  a->excludes(b)->excludes(c)->excludes(d);
  b->excludes(c)->excludes(d);
  c->excludes(d);
}

std::vector<double> ladder_values(const Ladder& l) {
  if (l.single_ln_n) return {*l.single_ln_n};
  if (l.single_n) {
    const double n = *l.single_n;
    if (!(n >= 3.0) || n > 1e15 || n != std::floor(n)) {
      throw DomainError("--n must be an integer in [3, 1e15]; use --ln-n for larger indices");
    }
    return {std::log(n)};
  }
  if (!l.ln_n.empty()) return parse_real_list(l.ln_n);
  if (!l.log10_n.empty()) {
    std::vector<double> v = parse_real_list(l.log10_n);
    for (double& x : v) x *= 2.302585092994045684;
    return v;
  }
  return {};
}

std::filesystem::path resolve(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("LILX_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p = resolve(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw DomainError("cannot open " + p.string() + " for writing");
  out << text;
}

struct Plot {
  std::string table;
  std::string x;
  std::vector<std::string> y;
  std::string title;
};

Plot plot_for(const ExperimentReport& r) {
  const RunConfig& c = r.config;
  switch (c.command) {
    case Command::GumbelTable: {
      Plot p{"cdf", "x", {"gumbel"}, "P{U_n <= x} along the index ladder"};
      for (const auto& col : r.table("cdf").columns) {
        if (col.rfind("exact_", 0) == 0 && col.rfind("exact_err_", 0) != 0) p.y.push_back(col);
      }
      return p;
    }
    case Command::Expectation:
      return {"expectation", "log10_n", {"expectation"}, "E[U_n] along the index ladder"};
    case Command::StrongLaw:
      return {"schedule", "k", {"probability"}, "strong-law probabilities along rho^k"};
    case Command::Simulate: {
      const std::string mode = c.options.count("mode") ? c.options.at("mode") : "iid";
      if (mode == "ou") return {"excursion_rates", "lambda", {"rate", "theory"}, "exceedances per unit local time"};
      if (mode == "walk") return {"replicates", "replicate", {"statistic"}, "random-walk statistic"};
      return {"quantiles", "empirical_quantile", {"probability", "exact_cdf"}, "tail supremum: empirical vs exact"};
    }
    case Command::Scale:
      break;
  }
  return {"scale", "x", {"log_abs"}, "scale function"};
}

int emit(RunConfig config, const Common& common) {
  config.format = common.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  config.output = common.output;
  config.sided = common.sided == "two" ? Sided::Two : Sided::One;
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report = run_command(config);
  if (common.timing) {
    report.provenance["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  const std::string text = config.format == OutputFormat::Json ? report.to_json() : report.to_csv();
  if (config.output.empty()) {
    std::cout << text;
  } else {
    write_file(config.output, text);
  }
  if (!common.svg.empty()) {
    const Plot p = plot_for(report);
    write_file(common.svg, render_svg(report.table(p.table), p.x, p.y, p.title));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and simulated laws for the iterated-logarithm supremum"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(lilx::kArtifactVersion));

  Common common;
  Ladder ladder;
  RunConfig config;

  // scale
  double scale_x = 0.0;
  std::string field = "closed-form-ou";
  bool log_out = false;
  auto* scale = app.add_subcommand("scale", "evaluate the scale function");
  scale->add_option("--x", scale_x, "argument")->required();
  scale->add_option("--general-field", field, "brownian, ou or repulsive-ou (general quadrature)")
      ->check(CLI::IsMember({"brownian", "ou", "repulsive-ou"}));
  scale->add_flag("--log", log_out, "print ln|f(x)|");
  scale->add_option("--output", common.output, "also write a CSV report");

  // gumbel-table
  auto* gumbel = app.add_subcommand("gumbel-table", "P{U_n <= x} against the Gumbel law");
  add_ladder(gumbel, ladder);
  gumbel->add_option("--x-min", config.x_min, "grid start");
  gumbel->add_option("--x-max", config.x_max, "grid end");
  gumbel->add_option("--steps", config.x_steps, "grid points")->check(CLI::PositiveNumber);
  add_common(gumbel, common);

  // simulate
  std::string mode = "iid";
  std::optional<double> sim_n, sim_cut, sim_horizon, sim_T, sim_h, sim_eps, sim_x0;
  std::string lambdas = "0.5,1,1.5";
  std::size_t replicates = 0;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo checks");
  sim->set_help_flag("--help", "print this help message and exit");  // frees --h for the step
  sim->add_option("--mode", mode, "ou, iid or walk")->check(CLI::IsMember({"ou", "iid", "walk"}));
  sim->add_option("--n", sim_n, "start index (iid, walk)");
  sim->add_option("--cut", sim_cut, "block cut for the iid sampler");
  sim->add_option("--horizon", sim_horizon, "random-walk horizon");
  sim->add_option("--T", sim_T, "OU horizon");
  sim->add_option("--h", sim_h, "OU step");
  sim->add_option("--eps", sim_eps, "local-time band half-width");
  sim->add_option("--x0", sim_x0, "OU start (default: stationary draw)");
  sim->add_option("--lambdas", lambdas, "comma-separated excursion levels (ou)");
  sim->add_option("--seed", common.seed, "64-bit seed");
  sim->add_option("--replicates", replicates, "replicates (default: 1 ou, 10000 iid, 200 walk)");
  add_common(sim, common);

  // expectation
  auto* expect = app.add_subcommand("expectation", "E[U_n] along the index ladder");
  add_ladder(expect, ladder);
  add_common(expect, common);

  // strong-law
  double c_value = 1.4, rho = 2.0;
  int k_max = 60;
  auto* strong = app.add_subcommand("strong-law", "probabilities along n = rho^k");
  strong->add_option("--c", c_value, "constant c in sqrt(1 + c L2 n / ln n)");
  strong->add_option("--rho", rho, "geometric ratio");
  strong->add_option("--k-max", k_max, "largest exponent k")->check(CLI::PositiveNumber);
  add_common(strong, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (scale->parsed()) {
      config.command = Command::Scale;
      config.parameters["x"] = scale_x;
      config.parameters["log"] = log_out ? 1.0 : 0.0;
      config.options["field"] = field;
      const ExperimentReport r = run_command(config);
      const auto& row = r.tables.front().rows.front();
      const double value = std::get<double>(row[2]);
      const double log_abs = std::get<double>(row[3]);
      const auto sign = std::get<std::int64_t>(row[4]);
      if (log_out) {
        std::printf("%s%s\n", sign < 0 ? "-" : "", sign == 0 ? "-inf" : format_double(log_abs).c_str());
      } else {
        std::printf("%s\n", format_double(value).c_str());
      }
      if (!common.output.empty()) write_file(common.output, r.to_csv());
      return 0;
    }
    config.seed = common.seed;
    config.ln_n_ladder = ladder_values(ladder);
    if (gumbel->parsed()) {
      config.command = Command::GumbelTable;
    } else if (expect->parsed()) {
      config.command = Command::Expectation;
    } else if (strong->parsed()) {
      config.command = Command::StrongLaw;
      config.parameters["c"] = c_value;
      config.parameters["rho"] = rho;
      config.parameters["k_max"] = k_max;
    } else {
      config.command = Command::Simulate;
      config.options["mode"] = mode;
      if (mode == "ou") {
        config.options["lambdas"] = lambdas;
        if (sim_T) config.parameters["T"] = *sim_T;
        if (sim_h) config.parameters["h"] = *sim_h;
        if (sim_eps) config.parameters["eps"] = *sim_eps;
        if (sim_x0) config.parameters["x0"] = *sim_x0;
      } else {
        if (sim_n) config.parameters["n"] = *sim_n;
        if (mode == "iid" && sim_cut) config.parameters["cut"] = *sim_cut;
        if (mode == "walk" && sim_horizon) config.parameters["horizon"] = *sim_horizon;
      }
      config.replicates = replicates ? replicates : mode == "ou" ? 1 : mode == "iid" ? 10000 : 200;
    }
    if (config.command != Command::Simulate) config.replicates = 1;
    return emit(config, common);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 1;
  }
}
