#pragma once

namespace acctime {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace acctime
