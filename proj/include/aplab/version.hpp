#pragma once

namespace aplab {

inline constexpr const char* library_version = "aplab 0.1.0";

} // namespace aplab
