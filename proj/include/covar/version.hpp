#pragma once

#include <string_view>

namespace covar {

inline constexpr std::string_view kToolName = "covar";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace covar
