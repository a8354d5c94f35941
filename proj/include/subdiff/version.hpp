#pragma once

namespace subdiff {
inline constexpr const char* kVersion = "0.1.0";
}
