#pragma once

namespace qmc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qmc
