#include <iostream>

#include "CLI11.hpp"
#include "oppenheim/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"S-arithmetic Oppenheim counting experiments"};
  app.set_version_flag("--version", oppenheim::tool_version());
  app.require_subcommand(1);

  std::string config;
  oppenheim::RunOptions opts;
  std::string out_dir = ".";
  for (const char* name : {"count", "volume", "ratio", "lemmas", "alpha"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "configuration file (key = value lines)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--workers", opts.workers, "OpenMP worker threads (0 = default)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--dump-vectors", opts.dump_vectors, "write the counted vectors as CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : oppenheim::kExitValidation;
  }
  opts.out_dir = out_dir;
  const std::string cmd = app.get_subcommands().front()->get_name();
  return oppenheim::run_file(cmd, config, opts, std::cerr);
}
