#ifndef JORDER_VERSION_HPP_
#define JORDER_VERSION_HPP_

namespace jorder {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jorder

#endif  // JORDER_VERSION_HPP_
