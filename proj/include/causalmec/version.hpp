#pragma once

namespace causalmec {
inline constexpr const char* kVersion = "0.1.0";
}
