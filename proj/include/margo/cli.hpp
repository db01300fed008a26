#pragma once

#include "margo/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace margo::cli {

enum Exit : int {
  kSolved = 0,
  kNegative = 1,
  kInputError = 2,
  kInvariantViolation = 3,
};

/// Runs one subcommand; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Kinds accepted by `generate --kind`.
const std::vector<std::string>& generator_kinds();

/// A complete instance file for the named generator.
io::Json generate_instance(const std::string& kind, std::uint64_t seed);

}  // namespace margo::cli
