#pragma once

namespace sdiwit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sdiwit
