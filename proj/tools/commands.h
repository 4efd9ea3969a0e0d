#ifndef TLINK_TOOLS_COMMANDS_H_
#define TLINK_TOOLS_COMMANDS_H_

#include <ostream>
#include <string>
#include <vector>

namespace tlink::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 2;
inline constexpr int kIncompatible = 3;

// Runs `tlink <args...>`: subcommands extract, train, evaluate, predict.
int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace tlink::cli

#endif  // TLINK_TOOLS_COMMANDS_H_
