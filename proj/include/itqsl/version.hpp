#pragma once

namespace itqsl {

inline constexpr const char* kToolName = "itqsl";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace itqsl
