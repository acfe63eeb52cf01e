#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hs::cli {

/// Entry point of the hslab tool. Returns the process exit status:
/// 0 success, 1 configuration, 2 solver, 3 envelope, 4 internal.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace hs::cli
