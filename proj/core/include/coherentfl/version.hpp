#pragma once

namespace coherentfl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace coherentfl
