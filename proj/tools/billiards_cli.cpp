#include <iostream>

#include "billiards/errors.hpp"
#include "config_binding.hpp"

using billiards::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Eigenmodes, resonances and mode entropies of 2D billiards"};
  app.set_config("--config", "", "key = value configuration file");
  app.require_subcommand(1, 1);

  RunConfig cfg;
  billiards::bind_config(app, cfg);

  const char* commands[][2] = {
      {"validate", "check the solvers against the circle oracles"},
      {"sweep", "continue modes along the deformation and classify encounters"},
      {"field", "dump the intensity of one branch point"},
      {"entropy-compare", "entropies of matched closed and open modes"},
      {"twolevel", "sweep of the two-level surrogate"},
  };
  for (const auto& c : commands) app.add_subcommand(c[0], c[1])->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return billiards::run_command(cfg, std::cout);
  } catch (const billiards::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
