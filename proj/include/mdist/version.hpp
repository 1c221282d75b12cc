#pragma once

namespace mdist {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mdist
