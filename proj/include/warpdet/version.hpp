#pragma once

namespace warpdet {

inline constexpr const char* kVersion = "warpdet 0.1.0";

}  // namespace warpdet
