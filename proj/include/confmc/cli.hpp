#pragma once

#include <iosfwd>

namespace confmc {

/// The confmc command line. Returns 0 when a verdict was produced (Unknown
/// and Stabilized included), 2 on invalid input, 3 on backend or solver failure.
int cli_main(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace confmc
