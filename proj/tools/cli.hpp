#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lancaster::cli {

/// Exit codes: 0 success, 1 usage or configuration error, 2 validation failure.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --threads if given, else LANCASTER_MT_THREADS, else 1.
unsigned resolve_threads(int flag_value);

}  // namespace lancaster::cli
