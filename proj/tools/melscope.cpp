#include <cstdio>
#include <string>
#include <vector>

#include "melscope/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const melscope::DispatchResult res = melscope::dispatch(args);
    if (!res.output.empty()) std::fputs(res.output.c_str(), stdout);
    if (!res.diagnostics.empty()) std::fputs(res.diagnostics.c_str(), stderr);
    return res.exit_code;
}
