// version.hpp -- toolkit version constant shared by library and CLI.
#pragma once

#include <string_view>

namespace qpigeon {

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace qpigeon
