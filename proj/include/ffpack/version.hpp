#pragma once

namespace ffpack {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ffpack
