#pragma once

namespace d2dcov {

inline constexpr const char* kToolName = "d2dcov";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace d2dcov
