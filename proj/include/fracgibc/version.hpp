#pragma once

namespace fracgibc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fracgibc
