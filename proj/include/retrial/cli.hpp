#pragma once

namespace retrial {

// Command-line surface. Exit codes: 0 success, 1 usage error, 2 runtime
// error.
int cli(int argc, const char* const* argv);

}  // namespace retrial
