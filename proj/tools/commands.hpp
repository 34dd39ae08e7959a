#pragma once

#include <iosfwd>
#include <string>

#include "run_config.hpp"

namespace fairplay::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitConfigError = 2,
    kExitDomainError = 3,
};

/// Runs one of price | quote | risk-curve | smile | validate against the
/// C API. Report goes to cfg.out when set, otherwise to `out`; diagnostics
/// and the validate summary go to `err`.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out,
                std::ostream& err);

}  // namespace fairplay::cli
