#pragma once

namespace unfollow {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace unfollow
