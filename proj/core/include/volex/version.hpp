#pragma once

namespace volex {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace volex
