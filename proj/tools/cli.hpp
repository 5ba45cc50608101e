#pragma once

#include <iosfwd>

namespace stuckelberg::cli {

/// Entry point of the `stuckelberg` executable. Diagnostics go to err;
/// results without an --out path go to out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stuckelberg::cli
