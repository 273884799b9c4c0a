#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qdop/scalar.hpp"

namespace qdop {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitInternal = 3 };

// args excludes the program name. Output is buffered and written once.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// key=value per line; blank lines and # comments are skipped. Values are
// integers or fractions. Throws PreconditionViolated on malformed input.
std::map<std::string, Rational> parse_params_text(std::string_view text);

}  // namespace qdop
