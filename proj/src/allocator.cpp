#include "javf/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "javf/errors.hpp"

namespace javf::alloc {

const char* method_name(AllocMethod m) {
    switch (m) {
        case AllocMethod::arbitrary: return "arbitrary";
        case AllocMethod::audio_first: return "audio_first";
        case AllocMethod::greedy: return "greedy";
        case AllocMethod::dp: return "dp";
        case AllocMethod::lagrangian: return "lagrangian";
    }
    return "?";
}

namespace {

void check_inputs(const CurvePair& curves, const RateModel& rm, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("fusion weight must lie in [0, 1]");
    if (rm.video_cost == 0 || rm.audio_cost == 0)
        throw ConfigError("per-item byte costs must be positive");
    if (curves.video.size() < rm.video_avail + 1 || curves.audio.size() < rm.audio_avail + 1)
        throw ConfigError("coverage curves shorter than the available item counts");
    for (const auto* c : {&curves.video, &curves.audio}) {
        if (c->empty() || c->front() != 0.0)
            throw ConfigError("coverage curves must start at zero");
        for (std::size_t i = 1; i < c->size(); ++i)
            if ((*c)[i] < (*c)[i - 1] || (*c)[i] > 1.0 + 1e-12)
                throw ConfigError("coverage curves must be non-decreasing fractions");
    }
}

AllocationResult finish(const CurvePair& curves, const RateModel& rm, double alpha,
                        std::size_t n_video, std::size_t n_audio, const char* method) {
    AllocationResult out;
    out.n_video = n_video;
    out.n_audio = n_audio;
    out.rate = rm.video_cost * n_video + rm.audio_cost * n_audio;
    out.fused_coverage = fused(alpha, curves.video[n_video], curves.audio[n_audio]);
    out.method = method;
    return out;
}

} // namespace

AllocationResult arbitrary_allocate(const CurvePair& curves, const RateModel& rm, double alpha) {
    check_inputs(curves, rm, alpha);
    const std::uint64_t half = rm.budget / 2;
    std::size_t n_v = std::min<std::uint64_t>(rm.video_avail, half / rm.video_cost);
    std::size_t n_a = std::min<std::uint64_t>(rm.audio_avail, half / rm.audio_cost);
    // A modality capped by its item count hands its leftover half to the
    // other; plain rounding slack is deliberately left unspent.
    if (n_v == rm.video_avail) {
        const std::uint64_t remaining = rm.budget - rm.video_cost * n_v - rm.audio_cost * n_a;
        n_a = std::min<std::uint64_t>(rm.audio_avail, n_a + remaining / rm.audio_cost);
    }
    if (n_a == rm.audio_avail) {
        const std::uint64_t remaining = rm.budget - rm.video_cost * n_v - rm.audio_cost * n_a;
        n_v = std::min<std::uint64_t>(rm.video_avail, n_v + remaining / rm.video_cost);
    }
    return finish(curves, rm, alpha, n_v, n_a, "arbitrary");
}

AllocationResult audio_first_allocate(const CurvePair& curves, const RateModel& rm, double alpha) {
    check_inputs(curves, rm, alpha);
    const std::size_t n_a = std::min<std::uint64_t>(rm.audio_avail, rm.budget / rm.audio_cost);
    const std::uint64_t remaining = rm.budget - rm.audio_cost * n_a;
    const std::size_t n_v = std::min<std::uint64_t>(rm.video_avail, remaining / rm.video_cost);
    return finish(curves, rm, alpha, n_v, n_a, "audio_first");
}

AllocationResult greedy_allocate(const CurvePair& curves, const RateModel& rm, double alpha,
                                 const GreedyOptions& opt) {
    check_inputs(curves, rm, alpha);
    if (opt.gain == GreedyOptions::Gain::additive && opt.lambda > 0)
        throw ConfigError("the additive gain penalty must be non-positive");

    std::size_t n_v = 0, n_a = 0;
    std::uint64_t left = rm.budget;
    std::string trace;
    while (true) {
        const bool can_v = n_v < rm.video_avail && rm.video_cost <= left;
        const bool can_a = n_a < rm.audio_avail && rm.audio_cost <= left;
        if (!can_v && !can_a) break;
        const double dv = can_v ? alpha * (curves.video[n_v + 1] - curves.video[n_v]) : 0.0;
        const double da = can_a ? (1.0 - alpha) * (curves.audio[n_a + 1] - curves.audio[n_a]) : 0.0;
        double gain_v, gain_a;
        if (opt.gain == GreedyOptions::Gain::per_byte) {
            gain_v = dv / static_cast<double>(rm.video_cost);
            gain_a = da / static_cast<double>(rm.audio_cost);
        } else {
            gain_v = dv + opt.lambda * static_cast<double>(rm.video_cost);
            gain_a = da + opt.lambda * static_cast<double>(rm.audio_cost);
        }
        // ties go to audio
        const bool pick_a = can_a && (!can_v || gain_a >= gain_v);
        if (pick_a) {
            ++n_a;
            left -= rm.audio_cost;
            trace.push_back('A');
        } else {
            ++n_v;
            left -= rm.video_cost;
            trace.push_back('V');
        }
    }
    AllocationResult out = finish(curves, rm, alpha, n_v, n_a, "greedy");
    out.trace = std::move(trace);
    return out;
}

namespace {

// Shared grid fill: F(i, j, b) = best fused coverage using at most i video
// picks, j audio picks and b budget units. Skip transitions inherit the
// neighbour cells; a take transition extends the exact-count state (i-1, j)
// or (i, j-1), so its candidate value is the fused coverage of (i, j) itself,
// computed by the same expression the enumeration oracle uses — that keeps
// the fill exact for arbitrary monotone curves and bit-identical to the
// oracle. Tie order: skip-video, skip-audio, take; a candidate replaces the
// incumbent only when strictly better, which also keeps realized counts
// minimal when curves go flat.
struct DpPlane {
    std::uint64_t unit = 1;
    std::size_t n_b = 0; // budget cells per row: units + 1
    std::vector<double> f;
    std::vector<std::uint32_t> i_of;
    std::vector<std::uint32_t> j_of;

    AllocationResult read(const CurvePair& curves, const RateModel& rm, double alpha,
                          std::uint64_t budget) const {
        const std::size_t b = static_cast<std::size_t>(
            std::min<std::uint64_t>(budget / unit, n_b - 1));
        const std::size_t cell = rm.audio_avail * n_b + b;
        return finish(curves, rm, alpha, i_of[cell], j_of[cell], "dp");
    }
};

DpPlane dp_fill(const CurvePair& curves, const RateModel& rm, double alpha, const DpOptions& opt) {
    const std::uint64_t unit = std::gcd(rm.video_cost, rm.audio_cost);
    const std::uint64_t units = rm.budget / unit;
    const std::size_t n_b = static_cast<std::size_t>(units) + 1;
    const std::size_t n_j = rm.audio_avail + 1;
    const std::uint64_t plane_bytes =
        static_cast<std::uint64_t>(n_b) * n_j * (sizeof(double) + 2 * sizeof(std::uint32_t));
    if (2 * plane_bytes > opt.max_state_bytes)
        throw UseLagrangianMode("allocation grid of " + std::to_string(2 * plane_bytes) +
                                " bytes exceeds the configured bound");

    const std::uint64_t cv = rm.video_cost / unit;
    const std::uint64_t ca = rm.audio_cost / unit;

    DpPlane cur, prev;
    cur.unit = unit;
    cur.n_b = n_b;
    cur.f.assign(n_j * n_b, 0.0);
    cur.i_of.assign(n_j * n_b, 0);
    cur.j_of.assign(n_j * n_b, 0);
    prev = cur;

    for (std::size_t i = 0; i <= rm.video_avail; ++i) {
        if (i > 0) std::swap(cur, prev);
        for (std::size_t j = 0; j < n_j; ++j) {
            const double fused_ij = fused(alpha, curves.video[i], curves.audio[j]);
            const std::uint64_t cost_ij = cv * i + ca * j;
            for (std::size_t b = 0; b < n_b; ++b) {
                const std::size_t cell = j * n_b + b;
                double best = 0.0;
                std::uint32_t bi = 0, bj = 0;
                bool seeded = false;
                if (i > 0) { // skip-video
                    best = prev.f[cell];
                    bi = prev.i_of[cell];
                    bj = prev.j_of[cell];
                    seeded = true;
                }
                if (j > 0) { // skip-audio
                    const std::size_t left = cell - n_b;
                    if (!seeded || cur.f[left] > best) {
                        best = cur.f[left];
                        bi = cur.i_of[left];
                        bj = cur.j_of[left];
                        seeded = true;
                    }
                }
                if (cost_ij <= b && (!seeded || fused_ij > best)) { // take
                    best = fused_ij;
                    bi = static_cast<std::uint32_t>(i);
                    bj = static_cast<std::uint32_t>(j);
                    seeded = true;
                }
                cur.f[cell] = seeded ? best : 0.0;
                cur.i_of[cell] = bi;
                cur.j_of[cell] = bj;
            }
        }
    }
    return cur;
}

} // namespace

AllocationResult dp_allocate(const CurvePair& curves, const RateModel& rm, double alpha,
                             const DpOptions& opt) {
    check_inputs(curves, rm, alpha);
    return dp_fill(curves, rm, alpha, opt).read(curves, rm, alpha, rm.budget);
}

namespace {

// Separable maximizer of fused coverage + lambda * rate at a fixed
// multiplier; smallest counts win ties so the realized rate is
// non-increasing as lambda falls.
std::pair<std::size_t, std::size_t> lagrangian_argmax(const CurvePair& curves, const RateModel& rm,
                                                      double alpha, double lambda) {
    std::size_t best_i = 0, best_j = 0;
    double best_v = alpha * curves.video[0];
    for (std::size_t i = 1; i <= rm.video_avail; ++i) {
        const double v =
            alpha * curves.video[i] + lambda * static_cast<double>(rm.video_cost * i);
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }
    double best_w = (1.0 - alpha) * curves.audio[0];
    for (std::size_t j = 1; j <= rm.audio_avail; ++j) {
        const double w =
            (1.0 - alpha) * curves.audio[j] + lambda * static_cast<double>(rm.audio_cost * j);
        if (w > best_w) {
            best_w = w;
            best_j = j;
        }
    }
    return {best_i, best_j};
}

} // namespace

AllocationResult lagrangian_point(const CurvePair& curves, const RateModel& rm, double alpha,
                                  double lambda) {
    check_inputs(curves, rm, alpha);
    if (lambda > 0) throw ConfigError("rate multiplier must be non-positive");
    const auto [i, j] = lagrangian_argmax(curves, rm, alpha, lambda);
    AllocationResult out = finish(curves, rm, alpha, i, j, "lagrangian");
    out.lambda_star = lambda;
    return out;
}

AllocationResult lagrangian_allocate(const CurvePair& curves, const RateModel& rm, double alpha,
                                     double budget_tol) {
    check_inputs(curves, rm, alpha);

    const auto rate_of = [&](std::pair<std::size_t, std::size_t> c) {
        return rm.video_cost * c.first + rm.audio_cost * c.second;
    };

    auto best_pick = std::pair<std::size_t, std::size_t>{0, 0};
    double best_lambda = -std::numeric_limits<double>::infinity();
    double best_value = -1.0;
    const auto consider = [&](std::pair<std::size_t, std::size_t> c, double lam) {
        if (rate_of(c) > rm.budget) return false;
        const double v = fused(alpha, curves.video[c.first], curves.audio[c.second]);
        if (v > best_value || (v == best_value && rate_of(c) < rate_of(best_pick))) {
            best_value = v;
            best_pick = c;
            best_lambda = lam;
        }
        return true;
    };

    double hi = 0.0; // treated as infeasible once the unpenalized pick busts the budget
    if (consider(lagrangian_argmax(curves, rm, alpha, 0.0), 0.0)) {
        AllocationResult out = finish(curves, rm, alpha, best_pick.first, best_pick.second,
                                      "lagrangian");
        out.lambda_star = 0.0;
        return out;
    }

    double lo = -1.0 / static_cast<double>(std::min(rm.video_cost, rm.audio_cost));
    for (int guard = 0; guard < 128 && !consider(lagrangian_argmax(curves, rm, alpha, lo), lo);
         ++guard)
        lo *= 2.0;

    for (int it = 0; it < 128; ++it) {
        const double mid = (lo + hi) / 2.0;
        if (consider(lagrangian_argmax(curves, rm, alpha, mid), mid))
            lo = mid;
        else
            hi = mid;
        if (budget_tol > 0 && best_value >= 0 &&
            static_cast<double>(rm.budget - rate_of(best_pick)) <= budget_tol)
            break;
    }

    AllocationResult out =
        finish(curves, rm, alpha, best_pick.first, best_pick.second, "lagrangian");
    out.lambda_star = best_lambda;
    return out;
}

AllocationResult brute_force_allocate(const CurvePair& curves, const RateModel& rm, double alpha) {
    check_inputs(curves, rm, alpha);
    const std::size_t max_v = std::min<std::uint64_t>(rm.video_avail, rm.budget / rm.video_cost);
    std::size_t best_v = 0, best_a = 0;
    double best = -1.0;
    for (std::size_t n_v = 0; n_v <= max_v; ++n_v) {
        const std::uint64_t remaining = rm.budget - rm.video_cost * n_v;
        // maxing the audio count out of the leftover is optimal because the
        // audio curve is non-decreasing
        const std::size_t n_a = std::min<std::uint64_t>(rm.audio_avail, remaining / rm.audio_cost);
        const double v = fused(alpha, curves.video[n_v], curves.audio[n_a]);
        if (v > best) {
            best = v;
            best_v = n_v;
            best_a = n_a;
        }
    }
    return finish(curves, rm, alpha, best_v, best_a, "brute_force");
}

std::vector<SeriesRow> rate_coverage_series(AllocMethod method, const CurvePair& curves,
                                            RateModel rm, double alpha,
                                            const std::vector<std::uint64_t>& budgets,
                                            double threshold_stamp, const DpOptions& dp_opt,
                                            const GreedyOptions& greedy_opt) {
    for (std::size_t i = 1; i < budgets.size(); ++i)
        if (budgets[i] < budgets[i - 1]) throw ConfigError("budget grid must be ascending");

    std::vector<SeriesRow> rows;
    rows.reserve(budgets.size());
    if (budgets.empty()) return rows;

    const auto push = [&](std::uint64_t budget, const AllocationResult& r) {
        rows.push_back({budget, r.fused_coverage, r.n_video, r.n_audio, r.method, alpha,
                        threshold_stamp});
    };

    if (method == AllocMethod::dp) {
        // one fill at the top budget answers every smaller budget
        rm.budget = budgets.back();
        check_inputs(curves, rm, alpha);
        const auto plane = dp_fill(curves, rm, alpha, dp_opt);
        for (const std::uint64_t b : budgets) push(b, plane.read(curves, rm, alpha, b));
        return rows;
    }
    for (const std::uint64_t b : budgets) {
        rm.budget = b;
        switch (method) {
            case AllocMethod::arbitrary: push(b, arbitrary_allocate(curves, rm, alpha)); break;
            case AllocMethod::audio_first: push(b, audio_first_allocate(curves, rm, alpha)); break;
            case AllocMethod::greedy: push(b, greedy_allocate(curves, rm, alpha, greedy_opt)); break;
            case AllocMethod::lagrangian: push(b, lagrangian_allocate(curves, rm, alpha)); break;
            case AllocMethod::dp: break; // handled above
        }
    }
    return rows;
}

std::vector<std::uint64_t> budget_grid(std::uint64_t total, std::size_t count) {
    if (count == 0) throw ConfigError("budget grid needs at least one point");
    if (count == 1) return {total};
    std::vector<std::uint64_t> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = (2 * i * total + (count - 1)) / (2 * (count - 1)); // rounded i*total/(count-1)
    return grid;
}

} // namespace javf::alloc
