#pragma once

namespace cctree {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cctree
