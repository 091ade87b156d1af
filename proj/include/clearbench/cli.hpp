#ifndef CLEARBENCH_CLI_HPP
#define CLEARBENCH_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace clearbench {

// Command-line entry point (subcommands: validate, evaluate, pareto,
// correlate, simulate, fixture). All output goes through the streams so
// tests can capture it. Exit codes: 0 success, 1 validation/domain error,
// 2 I/O failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace clearbench

#endif  // CLEARBENCH_CLI_HPP
