#pragma once

namespace tskit {

inline constexpr const char* kVersion = "0.1.0";

} // namespace tskit
