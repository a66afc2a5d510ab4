#pragma once

namespace shiftframe {

inline constexpr const char* kToolName = "shiftframe";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace shiftframe
