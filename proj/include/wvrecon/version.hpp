#pragma once

namespace wvrecon {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wvrecon
