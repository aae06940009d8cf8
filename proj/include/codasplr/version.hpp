#pragma once

namespace codasplr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace codasplr
