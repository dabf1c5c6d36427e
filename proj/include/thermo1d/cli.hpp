#pragma once

#include <ostream>

namespace thermo1d {

/// Entry point of the `thermo1d` tool. Subcommands: run, sweep, mms,
/// stability, check-data. Returns 0 on success, 1 on validation failure and
/// 2 on a runtime failure such as an aborted run.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thermo1d
