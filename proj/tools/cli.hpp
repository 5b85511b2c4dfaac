#pragma once

#include <string>
#include <vector>

namespace snnq::cli {

// Dispatches a full argv (program name first). Returns the process exit code:
// 0 on success, 1 on a runtime failure (one-line diagnostic on stderr),
// 2 on a usage error.
int run(const std::vector<std::string>& argv);
int run(int argc, const char* const* argv);

}  // namespace snnq::cli
