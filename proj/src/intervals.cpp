#include "otg/intervals.hpp"

#include <algorithm>
#include <vector>

#include "otg/tolerances.hpp"

namespace otg {

namespace {

void redo_dedup(ExtremalSet& set, double tol) {
    std::vector<Profile> merged;
    for (const Profile& p : set.profiles) {
        if (!merged.empty() && p.total - merged.back().total < tol) {
            continue;
        }
        merged.push_back(p);
    }
    set.profiles = std::move(merged);
}

}  // namespace

BlockedIntervals derive_blocked_intervals(ExtremalSet& set) {
    BlockedIntervals out;
    // Merging profile types leave near-duplicate solutions whose duration gap
    // scales with sqrt(eps); absorb them with a scale-aware tolerance (still
    // far below the probe margins, so no real interval can collapse).
    {
        const double span = set.profiles.empty() ? 1.0 : set.profiles.back().total;
        redo_dedup(set, std::max(10 * kDedupTol, 1e-7 * std::max(1.0, span)));
    }
    if (set.profiles.empty() || set.profiles.size() > 5) {
        out.ok = false;
        return out;
    }
    // Pair consecutive durations from the right: for the odd cardinalities
    // this reproduces the (d2, d3) / (d4, d5) mapping with d1 = T_min alone
    // feasible. Even cardinalities occur when the fastest profile itself is
    // the left edge of a blocked interval (the post-brake graze degeneracy);
    // the same pairing then yields (d1, d2) [, (d3, d4)].
    const std::size_t n = set.profiles.size();
    for (std::size_t hi = n; hi >= 2; hi -= 2) {
        out.items[out.count++] = {set.profiles[hi - 2].total, set.profiles[hi - 1].total};
        if (hi == 2 || out.count == 2) {
            break;
        }
    }
    if (out.count == 2) {
        std::swap(out.items[0], out.items[1]);
    }
    return out;
}

}  // namespace otg
