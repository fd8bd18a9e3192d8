#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace glspec::cli {

/// Dispatches a glspectra command line; returns 0 on success, 2 on usage errors, 1 on failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace glspec::cli
