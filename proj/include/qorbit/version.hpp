#pragma once

namespace qorbit {

inline constexpr const char* kToolName = "qorbit";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qorbit
