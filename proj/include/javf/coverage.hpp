#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace javf::cover {

enum class Modality : std::uint8_t { video = 0, audio = 1 };

// Points are identified by index; geometry enters only through the distance
// callable, which must be symmetric with zero self-distance.
struct PointSet {
    std::size_t n = 0;
    std::function<double(std::size_t, std::size_t)> distance;
    Modality modality = Modality::video;
};

// Per point i: g[i] = indices within r, e[i] = indices within 3r, both
// sorted ascending and containing i itself.
struct Neighborhoods {
    std::vector<std::vector<std::uint32_t>> g;
    std::vector<std::vector<std::uint32_t>> e;
    double r = 0.0;
};

inline constexpr std::size_t kNoCap = std::numeric_limits<std::size_t>::max();

// strict: a pick marks covered only points within r of the center (the radius
// at which retrieval counts a query as reachable). expanded: a pick marks the
// whole 3r disk, the marking that carries the greedy's approximation bound.
enum class CoverMode : std::uint8_t { strict = 0, expanded = 1 };

struct RepresentativeSet {
    std::vector<std::uint32_t> reps;                    // pick order
    std::vector<std::vector<std::uint32_t>> cover_sets; // disjoint, each <= k_cap
    std::size_t covered_total = 0;
};

struct CoverageCurve {
    std::vector<std::size_t> f; // f[i] = points covered by the first i picks; f[0] = 0
    std::size_t n = 0;
    double r = 0.0;
    std::size_t k_cap = kNoCap;
    CoverMode mode = CoverMode::strict;
};

Neighborhoods build_neighborhoods(const PointSet& ps, double r);

// One greedy covering run to k_max picks: each step takes the disk with the
// most uncovered points (ties to the lowest index), assigns it its up-to-k_cap
// nearest uncovered points inside the marking scope (strict: r disk,
// expanded: 3r disk) and records the running covered count. Stops early once
// everything is covered. Both rkcp3 and coverage_curve are views of this run,
// which is what makes curve prefixes and rep prefixes interchangeable.
struct GreedyCoverResult {
    RepresentativeSet reps;
    CoverageCurve curve;
};

GreedyCoverResult greedy_cover(const PointSet& ps, const Neighborhoods& nb, std::size_t k_max,
                               std::size_t k_cap, CoverMode mode);

RepresentativeSet rkcp3(const PointSet& ps, std::size_t k, double r, std::size_t k_cap,
                        CoverMode mode = CoverMode::expanded);

CoverageCurve coverage_curve(const PointSet& ps, double r, std::size_t k_cap, std::size_t n_max,
                             CoverMode mode = CoverMode::strict);

// First k picks of a longer run, with their cover sets.
RepresentativeSet prefix(const RepresentativeSet& full, std::size_t k);

// Exhaustive optimum over all k-subsets of point-anchored radius-r disks;
// with a finite k_cap the per-subset value is a capacity-k_cap assignment
// optimum (solved as max-flow). Test oracle only.
std::size_t brute_force_cover(const PointSet& ps, std::size_t k, double r, std::size_t k_cap);

// f scaled by 1/n for budget fusion.
std::vector<double> normalized(const CoverageCurve& curve);

} // namespace javf::cover
