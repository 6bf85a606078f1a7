#pragma once

namespace causalkin {

// Entry point of the command-line tool; exposed as a library function so the
// integration tests can drive it in-process. Exit codes: 0 success,
// 2 configuration error, 3 data error, 4 algorithm error.
int cli_main(int argc, const char* const* argv);

}  // namespace causalkin
