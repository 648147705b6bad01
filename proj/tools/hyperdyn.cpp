#include <CLI11.hpp>

#include "hyperdyn/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = hyperdyn::cli;
  CLI::App app{"Covering-based hyperspace and set-valued dynamics on finite grids"};
  app.require_subcommand(1);
  cli::Options opt;
  std::string config, out = ".";
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  for (const char* name : {"limits", "continuity", "verify", "hyper"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory");
    sub->add_option("--jobs", jobs, "worker threads for per-point evaluation")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", seed, "seed for sampled corpora");
    sub->callback([&opt, name] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kConfig;
  }
  opt.config = config;
  opt.out = out;
  opt.jobs = jobs;
  if (app.get_subcommand(opt.command)->count("--seed")) opt.seed = seed;
  return cli::run(opt);
}
