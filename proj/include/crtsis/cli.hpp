#ifndef CRTSIS_CLI_HPP
#define CRTSIS_CLI_HPP

namespace crtsis {

// Dispatches the dealer/shareholder subcommands. Exit codes: 0 success,
// 2 usage error, 3 threshold refusal, 4 file format error, 5 consistency
// error.
int run_cli(int argc, const char* const* argv);

}  // namespace crtsis

#endif  // CRTSIS_CLI_HPP
