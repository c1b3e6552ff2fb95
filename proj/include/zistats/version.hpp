#pragma once

namespace zistats {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace zistats
