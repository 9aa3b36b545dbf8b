#pragma once

namespace mb1d {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace mb1d
