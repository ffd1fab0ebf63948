#ifndef ORBIGW_VERSION_HPP
#define ORBIGW_VERSION_HPP

namespace orbigw {
inline constexpr const char* kEngineVersion = "0.1.0";
}

#endif
