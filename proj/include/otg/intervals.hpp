#pragma once

#include <array>

#include "otg/step1.hpp"

namespace otg {

/// Open duration interval (start, end) within which no valid profile exists
/// for a degree of freedom. Both endpoints are durations of valid extremal
/// profiles; the endpoints themselves are feasible.
struct BlockedInterval {
    double start = 0.0;
    double end = 0.0;

    bool contains(double t) const { return t > start && t < end; }
};

struct BlockedIntervals {
    std::array<BlockedInterval, 2> items{};
    int count = 0;
    bool ok = true;

    bool blocked(double t) const {
        for (int i = 0; i < count; ++i) {
            if (items[i].contains(t)) {
                return true;
            }
        }
        return false;
    }
};

/// Map the deduplicated, duration-sorted valid extremal set onto blocked
/// intervals: 1 profile -> none, 3 -> (d2, d3), 5 -> (d2, d3) and (d4, d5).
/// Any other cardinality is an algorithm failure (ok = false) after one
/// rescue re-deduplication with a 10x looser tolerance.
BlockedIntervals derive_blocked_intervals(ExtremalSet& set);

}  // namespace otg
