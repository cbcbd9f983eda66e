#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace spe::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 2;
inline constexpr int kConfig = 3;
inline constexpr int kNumerical = 4;
inline constexpr int kIo = 5;

// Runs `spe <subcommand> ...`; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Structural battery behind `spe verify`.
std::vector<CheckResult> verification_battery(unsigned long seed);

}  // namespace spe::cli
