#pragma once

// Every RunConfig key as a --key option, shared by the tool and the
// acceptance runner so both read the same configuration files.

#include <string>
#include <vector>

#include "CLI11.hpp"
#include "billiards/commands.hpp"

namespace billiards {

inline void bind_config(CLI::App& app, RunConfig& cfg) {
  RunConfig::visit(cfg, [&](const char* name, auto& member) {
    if (std::string(name) == "command") return;
    app.add_option(std::string("--") + name, member)->capture_default_str();
  });
}

/// Defaults overridden by the "key = value" file at `path`.
inline RunConfig load_config(const std::string& path) {
  CLI::App app;
  RunConfig cfg;
  app.set_config("--config", path, "", true);
  bind_config(app, cfg);
  app.parse(std::vector<std::string>{});
  return cfg;
}

}  // namespace billiards
