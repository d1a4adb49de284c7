#pragma once

namespace epkit {

inline constexpr const char* kVersion = "0.1.0";

} // namespace epkit
