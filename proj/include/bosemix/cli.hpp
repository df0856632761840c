#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace bosemix {

// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitSolver = 3,
  kExitMiscibility = 4,
};

// Runs the CLI on args (args[0] is the program name). Tables and summaries
// go to out, diagnostics to err.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

// Uniform double in [0, 1) from a seeded 64-bit Mersenne twister, using the
// top 53 bits of each draw so sequences match across standard libraries.
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed);
  double operator()();

 private:
  std::mt19937_64 engine_;
};

}  // namespace bosemix
