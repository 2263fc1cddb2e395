#pragma once

#include <string>
#include <vector>

namespace crc::cli {

// Exit codes: 0 success, 2 input error, 3 trace budget exhausted, 1 other.
int run(const std::vector<std::string>& args);
int run(int argc, const char* const* argv);

} // namespace crc::cli
