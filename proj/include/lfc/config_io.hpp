#pragma once

#include <stdexcept>
#include <string>

#include "lfc/sim.hpp"

namespace lfc {

/// Config-file problem annotated with the path of the offending field
/// (e.g. "agents[2].theta").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parses the JSON config document (top-level keys: exosystem, agents,
/// graphs, schedule, observer, controller, init, sim).
SimConfig parse_config(const std::string& json_text);

SimConfig load_config(const std::string& path);

}  // namespace lfc
