#pragma once

namespace chainctl {
inline constexpr const char* kVersion = "0.1.0";
}
