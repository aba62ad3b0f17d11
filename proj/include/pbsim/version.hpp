#pragma once

namespace pbsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pbsim
