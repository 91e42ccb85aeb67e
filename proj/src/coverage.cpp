#include "javf/coverage.hpp"

#include <algorithm>
#include <queue>

#include "javf/errors.hpp"

namespace javf::cover {

Neighborhoods build_neighborhoods(const PointSet& ps, double r) {
    if (r < 0) throw ConfigError("covering radius must be non-negative");
    if (!ps.distance) throw ConfigError("point set has no distance function");
    Neighborhoods nb;
    nb.r = r;
    nb.g.assign(ps.n, {});
    nb.e.assign(ps.n, {});
    for (std::size_t i = 0; i < ps.n; ++i) {
        nb.g[i].push_back(static_cast<std::uint32_t>(i));
        nb.e[i].push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t i = 0; i < ps.n; ++i)
        for (std::size_t j = i + 1; j < ps.n; ++j) {
            const double d = ps.distance(i, j);
            if (d <= 3 * r) {
                nb.e[i].push_back(static_cast<std::uint32_t>(j));
                nb.e[j].push_back(static_cast<std::uint32_t>(i));
                if (d <= r) {
                    nb.g[i].push_back(static_cast<std::uint32_t>(j));
                    nb.g[j].push_back(static_cast<std::uint32_t>(i));
                }
            }
        }
    for (auto& v : nb.g) std::sort(v.begin(), v.end());
    for (auto& v : nb.e) std::sort(v.begin(), v.end());
    return nb;
}

GreedyCoverResult greedy_cover(const PointSet& ps, const Neighborhoods& nb, std::size_t k_max,
                               std::size_t k_cap, CoverMode mode) {
    if (k_cap == 0) throw ConfigError("cover-set cap must be positive");
    if (nb.g.size() != ps.n) throw ConfigError("neighborhoods do not match the point set");

    GreedyCoverResult out;
    out.curve.n = ps.n;
    out.curve.r = nb.r;
    out.curve.k_cap = k_cap;
    out.curve.mode = mode;
    out.curve.f.assign(k_max + 1, 0);

    std::vector<char> covered(ps.n, 0);
    // weight[i] = uncovered points within r of i; kept current incrementally
    // using distance symmetry (j within r of i  <=>  i within r of j).
    std::vector<std::size_t> weight(ps.n);
    for (std::size_t i = 0; i < ps.n; ++i) weight[i] = nb.g[i].size();

    std::size_t covered_total = 0;
    std::vector<std::pair<double, std::uint32_t>> pool;
    for (std::size_t step = 1; step <= k_max; ++step) {
        std::size_t best = 0, best_w = 0;
        for (std::size_t i = 0; i < ps.n; ++i)
            if (weight[i] > best_w) {
                best_w = weight[i];
                best = i;
            }
        if (best_w == 0) { // every point has itself within r, so all covered
            for (std::size_t s = step; s <= k_max; ++s) out.curve.f[s] = covered_total;
            break;
        }

        const auto& scope = (mode == CoverMode::strict ? nb.g : nb.e)[best];
        pool.clear();
        for (const std::uint32_t j : scope)
            if (!covered[j]) pool.emplace_back(ps.distance(best, j), j);
        std::sort(pool.begin(), pool.end()); // nearest first, index breaks ties
        const std::size_t take = std::min(k_cap, pool.size());

        std::vector<std::uint32_t> cover_set(take);
        for (std::size_t t = 0; t < take; ++t) {
            const std::uint32_t j = pool[t].second;
            cover_set[t] = j;
            covered[j] = 1;
            for (const std::uint32_t i : nb.g[j]) --weight[i];
        }
        std::sort(cover_set.begin(), cover_set.end());
        covered_total += take;
        out.reps.reps.push_back(static_cast<std::uint32_t>(best));
        out.reps.cover_sets.push_back(std::move(cover_set));
        out.curve.f[step] = covered_total;
    }
    out.reps.covered_total = covered_total;
    return out;
}

RepresentativeSet rkcp3(const PointSet& ps, std::size_t k, double r, std::size_t k_cap,
                        CoverMode mode) {
    const Neighborhoods nb = build_neighborhoods(ps, r);
    return greedy_cover(ps, nb, k, k_cap, mode).reps;
}

CoverageCurve coverage_curve(const PointSet& ps, double r, std::size_t k_cap, std::size_t n_max,
                             CoverMode mode) {
    if (n_max > ps.n) throw ConfigError("curve length exceeds the point count");
    const Neighborhoods nb = build_neighborhoods(ps, r);
    return greedy_cover(ps, nb, n_max, k_cap, mode).curve;
}

RepresentativeSet prefix(const RepresentativeSet& full, std::size_t k) {
    RepresentativeSet out;
    const std::size_t take = std::min(k, full.reps.size());
    out.reps.assign(full.reps.begin(), full.reps.begin() + static_cast<std::ptrdiff_t>(take));
    out.cover_sets.assign(full.cover_sets.begin(),
                          full.cover_sets.begin() + static_cast<std::ptrdiff_t>(take));
    for (const auto& cs : out.cover_sets) out.covered_total += cs.size();
    return out;
}

namespace {

// Assignment optimum for one center subset under a per-center capacity:
// max-flow on source -> centers (cap k_cap) -> points (cap 1) -> sink.
std::size_t capped_assignment(const std::vector<std::uint32_t>& centers,
                              const std::vector<std::vector<std::uint32_t>>& g, std::size_t n,
                              std::size_t k_cap) {
    const std::size_t k = centers.size();
    const std::size_t src = 0, snk = 1 + k + n;
    const std::size_t nodes = snk + 1;
    std::vector<std::vector<int>> cap(nodes, std::vector<int>(nodes, 0));
    const int center_cap = static_cast<int>(std::min<std::size_t>(k_cap, n));
    for (std::size_t c = 0; c < k; ++c) {
        cap[src][1 + c] = center_cap;
        for (const std::uint32_t j : g[centers[c]]) cap[1 + c][1 + k + j] = 1;
    }
    for (std::size_t j = 0; j < n; ++j) cap[1 + k + j][snk] = 1;

    std::size_t flow = 0;
    std::vector<int> parent(nodes);
    while (true) {
        std::fill(parent.begin(), parent.end(), -1);
        parent[src] = static_cast<int>(src);
        std::queue<std::size_t> q;
        q.push(src);
        while (!q.empty() && parent[snk] < 0) {
            const std::size_t u = q.front();
            q.pop();
            for (std::size_t v = 0; v < nodes; ++v)
                if (parent[v] < 0 && cap[u][v] > 0) {
                    parent[v] = static_cast<int>(u);
                    q.push(v);
                }
        }
        if (parent[snk] < 0) break;
        for (std::size_t v = snk; v != src; v = static_cast<std::size_t>(parent[v])) {
            const auto u = static_cast<std::size_t>(parent[v]);
            --cap[u][v];
            ++cap[v][u];
        }
        ++flow;
    }
    return flow;
}

} // namespace

std::size_t brute_force_cover(const PointSet& ps, std::size_t k, double r, std::size_t k_cap) {
    if (k_cap == 0) throw ConfigError("cover-set cap must be positive");
    if (k >= ps.n) k = ps.n;
    if (k == 0 || ps.n == 0) return 0;
    if (ps.n > 25 && k > 3) throw OracleTooLarge("covering oracle limited to n <= 25 or k <= 3");
    double combos = 1; // enumeration cost guard on top of the size guard
    for (std::size_t i = 0; i < k; ++i) combos = combos * static_cast<double>(ps.n - i) /
                                                 static_cast<double>(i + 1);
    if (combos > 2e6) throw OracleTooLarge("covering oracle: too many center subsets");

    const Neighborhoods nb = build_neighborhoods(ps, r);
    std::vector<std::uint32_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = static_cast<std::uint32_t>(i);
    std::vector<char> mark(ps.n);
    std::size_t best = 0;
    while (true) {
        std::size_t value;
        if (k_cap == kNoCap || k_cap >= ps.n) {
            std::fill(mark.begin(), mark.end(), 0);
            value = 0;
            for (const std::uint32_t c : pick)
                for (const std::uint32_t j : nb.g[c])
                    if (!mark[j]) {
                        mark[j] = 1;
                        ++value;
                    }
        } else {
            value = capped_assignment(pick, nb.g, ps.n, k_cap);
        }
        best = std::max(best, value);

        // next k-combination of [0, n)
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == ps.n - k + i - 1) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    return best;
}

std::vector<double> normalized(const CoverageCurve& curve) {
    std::vector<double> out(curve.f.size());
    for (std::size_t i = 0; i < curve.f.size(); ++i)
        out[i] = curve.n == 0 ? 0.0
                              : static_cast<double>(curve.f[i]) / static_cast<double>(curve.n);
    return out;
}

} // namespace javf::cover
