#ifndef HERMAN_VERSION_HPP
#define HERMAN_VERSION_HPP

namespace herman {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace herman

#endif
