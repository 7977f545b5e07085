#pragma once

namespace stein {
inline constexpr const char* kVersion = "0.1.0";
}
