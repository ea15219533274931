#pragma once

#include <string>
#include <vector>

namespace tskit::cli {

/// Dispatches one command. Returns 0 on success, 2 on validation errors
/// (one-line `error: <Class>: <message>` on stderr), 1 on internal faults.
int run(const std::vector<std::string>& args);

} // namespace tskit::cli
