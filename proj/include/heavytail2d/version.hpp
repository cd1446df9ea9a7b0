#pragma once

namespace ht2d {

inline constexpr const char* kVersion = "0.1.0";

}
