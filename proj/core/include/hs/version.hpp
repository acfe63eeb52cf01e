#pragma once

namespace hs {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace hs
