#pragma once

namespace sawmap {

inline constexpr const char* version_string = "sawmap 0.1.0";

}  // namespace sawmap
