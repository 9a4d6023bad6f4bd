#pragma once

namespace stir {

inline constexpr const char* kVersion = "1.0.0";

}
