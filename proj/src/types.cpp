#include "rphl/types.hpp"

#include <algorithm>
#include <cstdlib>

namespace rphl {

Index max_dimension() {
  Index limit = kHardDimensionLimit;
  if (const char* env = std::getenv("RPHL_MAX_DIM"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long long requested = std::strtoll(env, &end, 10);
    if (end != env && requested > 0) limit = std::min<Index>(limit, requested);
  }
  return limit;
}

void check_dimension(Index dim, const std::string& what) {
  const Index limit = max_dimension();
  if (dim > limit) {
    throw ResourceGuardError(what + ": dimension " + std::to_string(dim) + " exceeds guard " +
                             std::to_string(limit));
  }
}

}  // namespace rphl
