#pragma once

namespace fusion {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fusion
