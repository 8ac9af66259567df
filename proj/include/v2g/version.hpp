#pragma once

namespace v2g {
inline constexpr const char* kVersion = "0.1.0";
}
