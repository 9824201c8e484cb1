#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace polyham::cli {

enum ExitCode : int {
    ok = 0,
    check_failed = 1,
    config_error = 2,
    not_converged = 3,
    missing_coefficient = 4,
};

// Runs one command line; results go to --out or to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyham::cli

#include "polyham/check.hpp"

namespace polyham::cli {

// As run, with the analytic operations used by `check` replaced.
int run_with_ops(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                 const check::RadialOps& ops);

}  // namespace polyham::cli
