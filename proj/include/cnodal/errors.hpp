#pragma once

#include <stdexcept>
#include <string>

namespace cnodal {

// Error taxonomy shared by the library and the command line tool.
// The CLI maps each category to a stable process exit code.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct resolution_error : std::runtime_error {
  explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct depth_cap_error : std::runtime_error {
  explicit depth_cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

enum exit_code : int {
  exit_ok = 0,
  exit_input = 2,
  exit_resolution = 3,
  exit_config = 4,
  exit_depth_cap = 5,
};

}  // namespace cnodal
