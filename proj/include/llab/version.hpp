#pragma once

namespace llab {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace llab
