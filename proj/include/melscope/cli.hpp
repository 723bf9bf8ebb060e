#pragma once

#include <string>
#include <vector>

namespace melscope {

struct DispatchResult {
    int exit_code = 0;       // 0 ok, 1 runtime error, 2 usage error
    std::string output;      // JSON document (or CSV rows) for stdout
    std::string diagnostics; // human-readable stderr text
};

/// Runs one subcommand.  argv excludes the program name.
DispatchResult dispatch(const std::vector<std::string>& argv);

}  // namespace melscope
