#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace psh::cli {

// exit status: 0 ok, 1 a verification or computation failed, 2 usage, 3 hypothesis violated
enum Exit : int { ok = 0, failed = 1, usage = 2, hypothesis = 3 };

// args excludes the program name
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace psh::cli
