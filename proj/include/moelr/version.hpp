#pragma once

namespace moelr {

inline constexpr const char* kToolName = "moelr";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace moelr
