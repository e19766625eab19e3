#pragma once

#include <iosfwd>

namespace nid {

// Exit codes: 0 ok, 1 usage, 2 data, 3 numerical.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace nid
