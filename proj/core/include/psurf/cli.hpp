#pragma once

namespace psurf {

/// Runs one of the fit / flatten / simulate / eval subcommands.
/// Returns 0 on success, 1 on input or parse failures, 2 on numerical
/// failures.
int cli_dispatch(int argc, const char* const* argv);

}  // namespace psurf
