#pragma once

namespace aitsde {

inline constexpr const char* kToolVersion = "aitsde 0.1.0";

}  // namespace aitsde
