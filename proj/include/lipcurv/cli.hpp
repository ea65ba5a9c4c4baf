#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lipcurv {

struct CommandInfo {
    std::string name;
    std::string usage;
    std::vector<std::string> operations;  // library operations the command reaches
};
const std::vector<CommandInfo>& command_table();

// Exit codes: 0 when every certificate passes, 1 when one fails, 2 on usage
// or input errors.  The report goes to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lipcurv
