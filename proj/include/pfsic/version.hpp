#pragma once

namespace pfsic {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace pfsic
