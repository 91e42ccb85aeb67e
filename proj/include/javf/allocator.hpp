#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace javf::alloc {

struct RateModel {
    std::uint64_t video_cost = 0;  // bytes per stored video fingerprint
    std::uint64_t audio_cost = 0;  // bytes per stored audio segment
    std::uint64_t budget = 0;      // total byte budget
    std::size_t video_avail = 0;   // fingerprints available for selection
    std::size_t audio_avail = 0;   // segments available for selection
};

// Fraction-normalized coverage curves: video[i] is the corpus fraction
// covered by i video representatives; video[0] == 0; non-decreasing.
struct CurvePair {
    std::vector<double> video;
    std::vector<double> audio;
};

struct AllocationResult {
    std::size_t n_video = 0;
    std::size_t n_audio = 0;
    std::uint64_t rate = 0;         // video_cost*n_video + audio_cost*n_audio
    double fused_coverage = 0.0;
    std::string trace;              // one 'V'/'A' per pick for incremental methods
    std::optional<double> lambda_star;
    std::string method;
};

enum class AllocMethod { arbitrary, audio_first, greedy, dp, lagrangian };

const char* method_name(AllocMethod m);

// Weighted fusion of the two normalized curves. One shared definition so
// that every allocator and the enumeration oracle compare bit-identical
// values; written so alpha in {0,1} reduces exactly to one modality and
// full coverage on both sides fuses to exactly 1.0.
inline double fused(double alpha, double fv, double fa) {
    if (alpha == 1.0) return fv;
    if (alpha == 0.0) return fa;
    return alpha * (fv - fa) + fa;
}

struct GreedyOptions {
    // per_byte: pick the modality with the larger marginal coverage per byte.
    // additive: pick the larger alpha*df + lambda*cost (lambda <= 0).
    enum class Gain { per_byte, additive } gain = Gain::per_byte;
    double lambda = 0.0;
};

struct DpOptions {
    std::uint64_t max_state_bytes = 256ull << 20; // two (j, b) planes must fit
};

AllocationResult arbitrary_allocate(const CurvePair& curves, const RateModel& rm, double alpha);
AllocationResult audio_first_allocate(const CurvePair& curves, const RateModel& rm, double alpha);
AllocationResult greedy_allocate(const CurvePair& curves, const RateModel& rm, double alpha,
                                 const GreedyOptions& opt = {});

// Exact optimum of the budgeted fused-coverage objective. Grid DP over
// (video count, audio count, budget in gcd(video_cost, audio_cost) units);
// throws UseLagrangianMode when the working planes exceed the memory bound.
AllocationResult dp_allocate(const CurvePair& curves, const RateModel& rm, double alpha,
                             const DpOptions& opt = {});

// Large-scale fallback: bisection on the multiplier of the penalized
// objective fused + lambda*rate over lambda <= 0. Optimal among allocations
// on the convex hull of the rate-coverage frontier; off-hull optima (the
// knapsack counterexample) are out of its reach by construction.
AllocationResult lagrangian_allocate(const CurvePair& curves, const RateModel& rm, double alpha,
                                     double budget_tol = 0.0);

// Unconstrained maximizer of fused + lambda*rate at one fixed multiplier
// (lambda <= 0), smallest counts on ties. The bisection above walks this.
AllocationResult lagrangian_point(const CurvePair& curves, const RateModel& rm, double alpha,
                                  double lambda);

// Enumeration oracle: for each video count the audio count is maxed out of
// the leftover budget (optimal because the audio curve is non-decreasing).
AllocationResult brute_force_allocate(const CurvePair& curves, const RateModel& rm, double alpha);

struct SeriesRow {
    std::uint64_t budget = 0;
    double coverage = 0.0;
    std::size_t n_video = 0;
    std::size_t n_audio = 0;
    std::string method;
    double alpha = 0.0;
    double threshold = 0.0;
};

// One allocation per budget (ascending). The dp method fills its grid once
// at the largest budget and reads every budget off the final plane.
std::vector<SeriesRow> rate_coverage_series(AllocMethod method, const CurvePair& curves,
                                            RateModel rm, double alpha,
                                            const std::vector<std::uint64_t>& budgets,
                                            double threshold_stamp, const DpOptions& dp_opt = {},
                                            const GreedyOptions& greedy_opt = {});

// Evenly spaced byte budgets from 0 to total inclusive.
std::vector<std::uint64_t> budget_grid(std::uint64_t total, std::size_t count);

} // namespace javf::alloc
