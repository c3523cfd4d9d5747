#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace jpit {

inline constexpr const char* kVersion = "0.1.0";
// Default field modulus when neither --modulus nor a circuit header sets one.
inline constexpr const char* kModulusEnv = "JPIT_MODULUS";

// `args` excludes the program name. Exit codes: 0 success (nonzero verdict
// for pit), 2 pit verdict zero, 1 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jpit
