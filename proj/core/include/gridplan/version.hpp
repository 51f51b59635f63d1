#pragma once

namespace gridplan {

inline constexpr const char* kVersion = "0.1.0";

}
