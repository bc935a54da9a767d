#pragma once

namespace anneal {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace anneal
