#pragma once

#include <iosfwd>

namespace hestoncal {

/// Entry point of the `hestoncal` tool. Returns 0 on success, 1 on usage or
/// validation errors and 2 on numeric or I/O failures.
int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hestoncal
