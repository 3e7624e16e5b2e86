#pragma once

namespace logperiodic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace logperiodic
