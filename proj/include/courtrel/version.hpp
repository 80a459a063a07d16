#ifndef COURTREL_VERSION_HPP
#define COURTREL_VERSION_HPP

namespace courtrel {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
