#pragma once

namespace gpf {

inline constexpr const char* kToolName = "gpfactor";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace gpf
