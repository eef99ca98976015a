// bubbleforge command-line front end: verify / sweep / blowup.
#include <omp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "bubbleforge/experiments.hpp"

using namespace bubbleforge;

namespace {

enum Exit { kOk = 0, kFailed = 1, kConfig = 2, kNumerical = 3 };

void add_experiment_options(CLI::App& app, ExperimentConfig& c) {
  app.add_option("--lambda1", c.lambda1, "inner / first bubble scale (default 1/420 for thm-b, 0.0099 otherwise)");
  app.add_option("--lambda2", c.lambda2, "outer / second bubble scale");
  app.add_option("--rho", c.rho, "inner glue radius");
  app.add_option("--R", c.R, "outer glue radius, or ball radius for lemma-37");
  app.add_option("--lambda", c.lambda, "common scale for example-525");
  app.add_option("--sep", c.sep, "center separation for example-525");
  app.add_flag("--unequal", c.unequal, "example-525 with lambda1 != lambda2");
  app.add_option("--sigma", c.sigma, "thm-b sigma >= 1");
  app.add_option("--r1", c.r1, "thm-b radius of the first ball");
  app.add_option("--a", c.a, "thm-b radius of the second ball");
  app.add_option("--dist", c.dist, "thm-b center distance");
  app.add_option("--r1-width", c.r1_width, "thm-b transition width around the first ball");
  app.add_option("--a-width", c.a_width, "thm-b transition width around the second ball");
  app.add_option("--delta", c.delta, "glue-insert perturbation size");
  app.add_option("--alpha", c.alpha, "glue-insert alpha; default (n-4)/4");
  app.add_option("--stability", c.stability, "glue-insert allowed ratio of constants");
  app.add_option("--xi", c.xi, "evaluation point, comma separated")->delimiter(',');
  app.add_option("--exponent", c.exponent, "rep-singular field exponent; default 2.5-n");
  app.add_option("--eps", c.epsilons, "rep-singular excluded radii, comma separated")->delimiter(',');
  app.add_option("--samples", c.samples, "random cases where supported");
  app.add_option("--mu", c.mu, "blowup planted scale");
  app.add_option("--center", c.center, "blowup planted center")->delimiter(',');
  app.add_option("--mu2", c.mu2, "blowup second planted scale (0 = none)");
  app.add_option("--center2", c.center2, "blowup second planted center")->delimiter(',');
  app.add_option("--epsilon", c.epsilon, "blowup inner annulus radius");
  app.add_option("--window", c.window, "blowup fit radius in rescaled units");
  app.add_option("--delta-target", c.delta_target, "blowup C2 deviation target");
  app.add_option("--delta-target2", c.delta_target2, "blowup two-bubble deviation target");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bubbleforge: K-function experiments for glued bubbles"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option values; flags win");

  ExperimentConfig cfg;
  std::string out_path, format = "csv", kind;
  int threads = 0;
  bool no_timing = false;
  std::vector<std::string> ranges;

  app.add_option("--n", cfg.n, "dimension 3..6");
  app.add_option("--tol", cfg.tol, "pass tolerance; default depends on the experiment");
  app.add_option("--grid", cfg.grid, "scan points per axis; 0 = default");
  app.add_option("--out", out_path, "machine report path; default stdout");
  app.add_option("--format", format, "machine report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "OpenMP threads")->envname("BUBBLEFORGE_THREADS")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "seed for random cases");
  app.add_flag("--no-timing", no_timing, "report 0 seconds so reports are byte-identical");
  add_experiment_options(app, cfg);

  auto* verify = app.add_subcommand("verify", "run one experiment");
  verify->add_option("kind", kind, "experiment")->required()->check(CLI::IsMember(kind_names()));
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep, one headline row per tuple");
  sweep->add_option("kind", kind, "experiment")->required()->check(CLI::IsMember(kind_names()));
  sweep->add_option("--range", ranges, "name=lo:hi:count[:log] or name=v1,v2,...");
  app.add_subcommand("blowup", "plant bubbles and recover them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  if (threads > 0) omp_set_num_threads(threads);
  cfg.timing = !no_timing;

  std::vector<ReportRow> rows;
  try {
    if (app.got_subcommand("blowup")) kind = "blowup";
    cfg.kind = *parse_kind(kind);
    if (app.got_subcommand(sweep)) {
      std::vector<SweepAxis> axes;
      for (const auto& r : ranges) {
        const auto eq = r.find('=');
        if (eq == std::string::npos) throw ConfigError("--range needs name=spec");
        axes.push_back(parse_sweep_axis(r.substr(0, eq), r.substr(eq + 1)));
      }
      validate(cfg);
      rows = run_sweep(cfg, axes);
    } else {
      rows = run_experiment(cfg);
    }
  } catch (const InvalidInput& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }

  const std::string report = format == "json" ? format_json(rows) : format_csv(rows);
  if (out_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << out_path << "\n";
      return kConfig;
    }
    f << report;
  }
  std::cerr << format_summary(rows);
  for (const auto& r : rows)
    if (!r.pass) return kFailed;
  return kOk;
}
