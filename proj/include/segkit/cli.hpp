#pragma once

#include <string>
#include <vector>

namespace segkit::cli {

/// Dispatches the four subcommands (render, convert, evaluate, plan).
/// Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

}  // namespace segkit::cli
