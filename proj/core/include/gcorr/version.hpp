#pragma once

namespace gcorr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gcorr
