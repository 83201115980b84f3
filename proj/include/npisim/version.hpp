#pragma once

namespace npisim {

inline constexpr const char* version = "0.1.0";

} // namespace npisim
