// Command-line front end: simulate, test, hedge, catalog, run.

#include <iostream>

#include <CLI11.hpp>

#include "sympath/error.hpp"
#include "sympath/parallel.hpp"
#include "sympath/runner.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int threads = 0;
  std::vector<std::string> only;
};

void add_common(CLI::App* cmd, Common& c, bool with_only) {
  cmd->add_option("--config", c.config, "experiment config (JSON)")->required();
  cmd->add_option("--seed", c.seed, "seed; overrides the config and SYMPATH_SEED");
  cmd->add_option("--threads", c.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out-dir", c.out_dir, "output directory; overrides output.dir");
  if (with_only) cmd->add_option("--only", c.only, "run only the named invocations");
}

int execute(const Common& c, sympath::RunMode mode, std::size_t sample_paths) {
  if (c.threads > 0) sympath::set_num_threads(c.threads);
  const auto cfg = sympath::load_config(c.config);
  sympath::RunOptions opts;
  opts.mode = mode;
  opts.seed = c.seed;
  opts.out_dir = c.out_dir;
  opts.only = c.only;
  opts.sample_paths = sample_paths;
  opts.log = &std::cerr;
  const auto res = sympath::run_experiment(cfg, opts);
  std::cout << res.summary["verdict"].get<std::string>() << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sympath: Monte Carlo checks of path symmetries and barrier hedges"};
  app.require_subcommand(1);
  Common sim, test, hedge, run;
  std::size_t sample_paths = 8;

  auto* cs = app.add_subcommand("simulate", "simulate the configured process and write summaries");
  add_common(cs, sim, false);
  cs->add_option("--paths", sample_paths, "sample paths written to paths.csv");
  add_common(app.add_subcommand("test", "run the configured tests"), test, true);
  add_common(app.add_subcommand("hedge", "run the configured hedges"), hedge, true);
  add_common(app.add_subcommand("run", "run tests and hedges"), run, true);
  auto* cat = app.add_subcommand("catalog", "list processes, default families and canned suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cat->parsed()) {
      std::cout << sympath::catalog_text();
      return 0;
    }
    if (cs->parsed()) return execute(sim, sympath::RunMode::Simulate, sample_paths);
    if (app.got_subcommand("test")) return execute(test, sympath::RunMode::Tests, 0);
    if (app.got_subcommand("hedge")) return execute(hedge, sympath::RunMode::Hedges, 0);
    return execute(run, sympath::RunMode::All, 0);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
