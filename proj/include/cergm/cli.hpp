#pragma once

namespace cergm::cli {

/// Entry point of the `cergm` tool. Returns 0 on success, 2 on domain or
/// usage errors, 3 when a numerical method did not converge.
int run(int argc, char** argv);

}  // namespace cergm::cli
