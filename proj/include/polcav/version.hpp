#pragma once

namespace polcav {

inline constexpr const char* kVersion = "0.1.0";

} // namespace polcav
