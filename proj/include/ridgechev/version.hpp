#pragma once

namespace ridgechev {

inline constexpr const char* tool_name = "ridgechev";
inline constexpr const char* tool_version = "0.1.0";

} // namespace ridgechev
