#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imbal::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

/// Runs one command line (args excludes the program name). Documents go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imbal::cli
