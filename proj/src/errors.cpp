#include "jpsn/errors.hpp"

// Exception types are header-only; this unit anchors the vtables in the library.
namespace jpsn {
}  // namespace jpsn
