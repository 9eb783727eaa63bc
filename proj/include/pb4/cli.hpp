#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace pb4 {

struct RunConfig {
  std::string subcommand;
  nlohmann::json params;  // every key of the subcommand, defaults filled
  unsigned seed = 0;
  std::string out;  // empty means stdout
};

/// Thrown for malformed or out-of-range configuration; the message names the field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fills defaults and validates `raw` against the subcommand's keys.
RunConfig resolve_config(const std::string& subcommand, const nlohmann::json& raw);
/// Reads a JSON object with a "subcommand" key plus parameters.
RunConfig load_config(const std::string& path);

/// argv without the program name. 0 success, 2 invalid input, 1 failed check.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace pb4
