#pragma once

namespace ate {

inline constexpr const char* kEngineVersion = "1.0.0";

} // namespace ate
