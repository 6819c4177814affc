#pragma once

namespace psurf {

inline constexpr const char* k_tool_version = "0.1.0";

}  // namespace psurf
