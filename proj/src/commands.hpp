#pragma once

// Command dispatch behind the C API: every subcommand takes string key/value
// arguments and produces a versioned JSON envelope plus optional CSV.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfa/errors.hpp"

namespace tfa {

using Args = std::map<std::string, std::string>;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kMaxAutoDigits = 4096;

struct CommandOutput {
  nlohmann::json envelope;
  std::string csv;  // empty when the command has no tabular form
  bool allPass = true;
  int digits = 0;
};

struct CommandFailure : std::runtime_error {
  CommandFailure(ErrorCode c, const std::string& what, int suggested = 0)
      : std::runtime_error(what), code(c), suggestedDigits(suggested) {}
  ErrorCode code;
  int suggestedDigits;
};

const std::vector<std::string>& commandNames();

// Digits come from args["digits"], else TFA_DIGITS, else the default. Without
// an explicit --digits, precision failures are retried at doubled precision
// up to kMaxAutoDigits. Throws CommandFailure.
CommandOutput runCommand(const std::string& command, const Args& args);

// Empty when the envelope satisfies the schema, else the first violation.
std::string validateEnvelope(const nlohmann::json& envelope);

}  // namespace tfa
