#pragma once

#include <compare>
#include <string>
#include <vector>

#include "errors.hpp"

namespace patternlab {

// X_i^j(sigma) = 1 iff sigma_i = j.
struct MPermIndicator {
    int pos = 0;    // i, 1-based
    int value = 0;  // j, a letter
    auto operator<=>(const MPermIndicator&) const = default;
};

// X_{ij}(pi) = 1 iff pi has an arc from i to j.
struct ArcIndicator {
    int i = 0;
    int j = 0;  // i < j
    auto operator<=>(const ArcIndicator&) const = default;
};

using MPermBag = std::vector<MPermIndicator>;  // multiset of indicators
using ArcBag = std::vector<ArcIndicator>;

inline std::string indicator_str(const MPermIndicator& x) {
    return std::to_string(x.pos) + ":" + std::to_string(x.value);
}

inline std::string indicator_str(const ArcIndicator& x) {
    return std::to_string(x.i) + "-" + std::to_string(x.j);
}

}  // namespace patternlab
