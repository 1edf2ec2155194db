#pragma once

namespace mbrom {
inline constexpr const char* version = "0.1.0";
}
