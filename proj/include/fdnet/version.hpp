#pragma once

namespace fdnet {
inline constexpr const char* kVersion = "0.1.0";
}
