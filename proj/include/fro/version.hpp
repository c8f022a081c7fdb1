#pragma once

namespace fro {
inline constexpr const char* version = "0.1.0";
}
