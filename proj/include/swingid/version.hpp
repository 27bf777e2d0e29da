#pragma once

namespace swingid {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace swingid
