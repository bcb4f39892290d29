#ifndef HAMCYCLE_CONSTRUCTIONS_HPP
#define HAMCYCLE_CONSTRUCTIONS_HPP

#include <hamcycle/hypergraph.hpp>
#include <hamcycle/paths.hpp>
#include <hamcycle/search.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

namespace hamcycle {

/// The co-degree value n/(s(k-ell)) below which Hamilton ell-cycles can be absent.
inline Rational codegree_threshold(int n, int k, int ell)
{
    return Rational(n, ell_cycle_s(k, ell) * (k - ell));
}

/// ceil(n / (s(k-ell))).
inline int threshold_ceiling(int n, int k, int ell)
{
    const int d = ell_cycle_s(k, ell) * (k - ell);
    return (n + d - 1) / d;
}

namespace detail {

    inline void check_barrier_args(int n, int k, int ell)
    {
        if (k < 2 || ell < 1 || ell >= k)
            throw InvalidArgument("need k >= 2 and 1 <= ell < k");
        if (n % (k - ell) != 0)
            throw InvalidArgument("space barrier needs (k - ell) | n");
        if (n < ell_cycle_s(k, ell) * (k - ell))
            throw InvalidArgument("space barrier needs n >= s(k - ell)");
    }

    inline Hypergraph all_meeting(int n, int k, VertexSet core)
    {
        Hypergraph h(n, k);
        if (core.empty())
            return h;
        for_each_combination(VertexSet::range(n), k, [&](VertexSet e) {
            if (! e.disjoint_from(core))
                h.add_edge(e);
        });
        return h;
    }

} // namespace detail

/// Why a space barrier has no Hamilton ell-cycle: every edge meets the core,
/// a vertex lies in at most s edges of an ell-cycle, and the core can
/// therefore touch at most s|core| < n/(k-ell) cycle edges.
struct BarrierCertificate {
    int core_size = 0;
    int s = 0;
    int cycle_edges = 0;     // n / (k - ell)
    int coverable_edges = 0; // s * core_size
    bool every_edge_meets_core = false;

    [[nodiscard]] bool proves_no_cycle() const { return every_edge_meets_core && coverable_edges < cycle_edges; }
};

inline nlohmann::json to_json(const BarrierCertificate & c)
{
    return {{"core_size", c.core_size},
            {"s", c.s},
            {"cycle_edges", c.cycle_edges},
            {"coverable_edges", c.coverable_edges},
            {"every_edge_meets_core", c.every_edge_meets_core},
            {"proves_no_cycle", c.proves_no_cycle()}};
}

struct BarrierInstance {
    Hypergraph graph;
    VertexSet core;
    std::uint64_t min_codegree = 0;
    BarrierCertificate certificate;
};

/// Recomputes the certificate from the edge set.
inline BarrierCertificate certify_barrier(const Hypergraph & h, VertexSet core, int ell)
{
    BarrierCertificate c;
    c.core_size = core.size();
    c.s = ell_cycle_s(h.k(), ell);
    c.cycle_edges = h.n() / (h.k() - ell);
    c.coverable_edges = c.s * c.core_size;
    c.every_edge_meets_core = std::all_of(h.edges().begin(), h.edges().end(), [&](VertexSet e) { return ! e.disjoint_from(core); });
    return c;
}

/// Core {0, ..., c-1} plus extra_core further vertices, where
/// c = ceil(n/(s(k-ell))) - 1, and every k-set meeting the core.
inline BarrierInstance barrier_plus_slack(int n, int k, int ell, int extra_core)
{
    detail::check_barrier_args(n, k, ell);
    if (extra_core < 0)
        throw InvalidArgument("extra core size must be non-negative");
    const int core_size = threshold_ceiling(n, k, ell) - 1 + extra_core;
    if (n - core_size < k - 1)
        throw InvalidArgument("core leaves fewer than k-1 outside vertices");
    BarrierInstance out{detail::all_meeting(n, k, VertexSet::range(core_size)), VertexSet::range(core_size), 0, {}};
    out.min_codegree = min_ell_degree(out.graph, k - 1);
    if (out.min_codegree != static_cast<std::uint64_t>(core_size))
        throw std::logic_error("barrier co-degree differs from its core size");
    out.certificate = certify_barrier(out.graph, out.core, ell);
    return out;
}

/// The space barrier: minimum co-degree one below ceil(n/(s(k-ell))), no Hamilton ell-cycle.
inline BarrierInstance space_barrier(int n, int k, int ell)
{
    auto out = barrier_plus_slack(n, k, ell, 0);
    if (! out.certificate.proves_no_cycle())
        throw std::logic_error("space barrier certificate does not hold");
    return out;
}

inline Hypergraph complete_hypergraph(int n, int k)
{
    Hypergraph h(n, k);
    for_each_combination(VertexSet::range(n), k, [&](VertexSet e) { h.add_edge(e); });
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit_draw(std::mt19937_64 & rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// base plus every absent k-set independently with probability add_p.
/// Sets are visited in colex rank order and one draw is made per absent set.
inline Hypergraph random_codegree_model(const Hypergraph & base, double add_p, std::uint64_t seed)
{
    if (! (add_p >= 0 && add_p <= 1))
        throw InvalidArgument("add_p must lie in [0, 1]");
    Hypergraph h = base;
    std::mt19937_64 rng(seed);
    const std::uint64_t total = binom(base.n(), base.k());
    for (std::uint64_t r = 0; r < total; ++r) {
        const VertexSet e = colex_unrank(r, base.k());
        if (! base.has_edge(e) && unit_draw(rng) < add_p)
            h.add_edge(e);
    }
    return h;
}

inline Hypergraph random_uniform(int n, int k, double p, std::uint64_t seed)
{
    return random_codegree_model(Hypergraph(n, k), p, seed);
}

inline std::vector<Vertex> random_permutation(int n, std::uint64_t seed)
{
    std::vector<Vertex> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

/// Adds `count` distinct random k-sets inside `within` that are not yet edges
/// (fewer if not enough exist). Returns the added sets.
inline std::vector<VertexSet> add_random_edges_inside(Hypergraph & h, VertexSet within, int count, std::uint64_t seed)
{
    std::vector<VertexSet> pool;
    for_each_combination(within, h.k(), [&](VertexSet e) {
        if (! h.has_edge(e))
            pool.push_back(e);
    });
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(pool.size(), static_cast<std::size_t>(std::max(count, 0))));
    for (VertexSet e : pool)
        h.add_edge(e);
    return pool;
}

/// Removes `count` random edges among those passing `eligible` (fewer if not enough exist).
template <class Pred>
std::vector<VertexSet> remove_random_edges(Hypergraph & h, int count, std::uint64_t seed, Pred && eligible)
{
    std::vector<VertexSet> pool;
    for (VertexSet e : h.edges())
        if (eligible(e))
            pool.push_back(e);
    std::mt19937_64 rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(std::min(pool.size(), static_cast<std::size_t>(std::max(count, 0))));
    for (VertexSet e : pool)
        h.remove_edge(e);
    return pool;
}

/// k-partite k-graph addressed by (part, index) pairs. Unlike Hypergraph it
/// is not limited to 64 vertices; vertex ids are part offsets plus indices.
class KPartiteGraph {
public:
    KPartiteGraph(std::vector<int> sizes, bool complete) : sizes_(std::move(sizes)), complete_(complete)
    {
        if (sizes_.size() < 2)
            throw InvalidArgument("need at least two parts");
        int off = 0;
        for (int s : sizes_) {
            if (s < 1 || s > 127)
                throw InvalidArgument("part sizes must lie in 1..127");
            offsets_.push_back(off);
            off += s;
        }
        total_ = off;
    }

    [[nodiscard]] int k() const { return static_cast<int>(sizes_.size()); }
    [[nodiscard]] int part_size(int i) const { return sizes_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] const std::vector<int> & sizes() const { return sizes_; }
    [[nodiscard]] int vertex_count() const { return total_; }
    [[nodiscard]] int global(int part, int index) const { return offsets_[static_cast<std::size_t>(part)] + index; }
    [[nodiscard]] int part_of(int v) const
    {
        const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), v);
        return static_cast<int>(it - offsets_.begin()) - 1;
    }
    [[nodiscard]] int index_of(int v) const { return v - offsets_[static_cast<std::size_t>(part_of(v))]; }
    [[nodiscard]] bool complete() const { return complete_; }

    /// idx[i] is the index of the chosen vertex inside part i.
    [[nodiscard]] bool has_edge(const std::vector<int> & idx) const { return complete_ || tuples_.contains(encode(idx)); }

    void add_edge(const std::vector<int> & idx)
    {
        if (static_cast<int>(idx.size()) != k())
            throw InvalidArgument("crossing edge needs one index per part");
        for (int i = 0; i < k(); ++i)
            if (idx[static_cast<std::size_t>(i)] < 0 || idx[static_cast<std::size_t>(i)] >= part_size(i))
                throw InvalidArgument("index outside its part");
        if (! complete_)
            tuples_.insert(encode(idx));
    }

    [[nodiscard]] std::uint64_t edge_count() const
    {
        if (! complete_)
            return tuples_.size();
        std::uint64_t p = 1;
        for (int s : sizes_)
            p *= static_cast<std::uint64_t>(s);
        return p;
    }

    /// Edges as index tuples, in lexicographic order.
    [[nodiscard]] std::vector<std::vector<int>> edge_tuples() const
    {
        std::vector<std::vector<int>> out;
        if (complete_) {
            std::vector<int> idx(sizes_.size(), 0);
            while (true) {
                out.push_back(idx);
                int i = k() - 1;
                while (i >= 0 && ++idx[static_cast<std::size_t>(i)] == part_size(i))
                    idx[static_cast<std::size_t>(i--)] = 0;
                if (i < 0)
                    break;
            }
            return out;
        }
        for (std::uint64_t code : tuples_)
            out.push_back(decode(code));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Same graph as a Hypergraph with parts, when it fits in 64 vertices.
    [[nodiscard]] std::pair<Hypergraph, PartiteFamily> to_hypergraph() const
    {
        if (total_ > kMaxVertices)
            throw InvalidArgument("k-partite graph has more than 64 vertices");
        Hypergraph h(total_, k());
        for (const auto & idx : edge_tuples()) {
            VertexSet e;
            for (int i = 0; i < k(); ++i)
                e.insert(global(i, idx[static_cast<std::size_t>(i)]));
            h.add_edge(e);
        }
        PartiteFamily parts;
        for (int i = 0; i < k(); ++i) {
            VertexSet p;
            for (int j = 0; j < part_size(i); ++j)
                p.insert(global(i, j));
            parts.push_back(p);
        }
        return {std::move(h), std::move(parts)};
    }

    static KPartiteGraph from_hypergraph(const Hypergraph & h, const PartiteFamily & parts)
    {
        validate_partite(h, parts);
        if (static_cast<int>(parts.size()) != h.k())
            throw InvalidArgument("need exactly k parts");
        std::vector<int> sizes;
        for (VertexSet p : parts)
            sizes.push_back(p.size());
        KPartiteGraph g(sizes, false);
        for (VertexSet e : h.edges()) {
            std::vector<int> idx;
            for (VertexSet p : parts) {
                if ((e & p).size() != 1)
                    break;
                const Vertex v = (e & p).min();
                idx.push_back((p & VertexSet::range(v)).size());
            }
            if (static_cast<int>(idx.size()) == h.k())
                g.add_edge(idx);
        }
        return g;
    }

private:
    [[nodiscard]] std::uint64_t encode(const std::vector<int> & idx) const
    {
        std::uint64_t code = 0;
        for (int i = k() - 1; i >= 0; --i)
            code = code * 128 + static_cast<std::uint64_t>(idx[static_cast<std::size_t>(i)]);
        return code;
    }
    [[nodiscard]] std::vector<int> decode(std::uint64_t code) const
    {
        std::vector<int> idx(sizes_.size());
        for (int i = 0; i < k(); ++i) {
            idx[static_cast<std::size_t>(i)] = static_cast<int>(code % 128);
            code /= 128;
        }
        return idx;
    }

    std::vector<int> sizes_;
    std::vector<int> offsets_;
    int total_ = 0;
    bool complete_ = false;
    std::unordered_set<std::uint64_t> tuples_;
};

/// Part sizes of the balanced tuple: k-1 parts of (sk - s ell - 1)m and a last part of (k-1)m.
inline std::vector<int> tuple_part_sizes(int k, int ell, int m)
{
    if (k < 3 || ell < 1 || ell >= k || m < 1)
        throw InvalidArgument("need k >= 3, 1 <= ell < k and m >= 1");
    const int s = ell_cycle_s(k, ell);
    std::vector<int> sizes(static_cast<std::size_t>(k - 1), (s * k - s * ell - 1) * m);
    sizes.push_back((k - 1) * m);
    return sizes;
}

/// k-partite tuple with the balanced part sizes; each crossing k-set is an
/// edge with probability d (in lexicographic order of index tuples, one draw each).
inline KPartiteGraph regular_tuple(int k, int ell, int m, double d, std::uint64_t seed)
{
    if (! (d >= 0 && d <= 1))
        throw InvalidArgument("density must lie in [0, 1]");
    const auto sizes = tuple_part_sizes(k, ell, m);
    if (d == 1)
        return KPartiteGraph(sizes, true);
    KPartiteGraph g(sizes, false);
    std::mt19937_64 rng(seed);
    for (const auto & idx : KPartiteGraph(sizes, true).edge_tuples())
        if (unit_draw(rng) < d)
            g.add_edge(idx);
    return g;
}

/// Density of the sub-tuple picked by per-part index masks.
inline Rational tuple_density(const KPartiteGraph & g, const std::vector<std::uint64_t> & masks)
{
    long long prod = 1;
    for (std::uint64_t m : masks) {
        if (m == 0)
            throw InvalidArgument("density of a family with an empty part");
        prod *= std::popcount(m);
    }
    long long count = 0;
    for (const auto & idx : g.edge_tuples()) {
        bool in = true;
        for (std::size_t i = 0; i < idx.size() && in; ++i)
            in = (masks[i] >> idx[i]) & 1U;
        count += in;
    }
    return Rational(count, prod);
}

enum class RegularityVerdict { regular, irregular, budget_exceeded };

inline const char * to_string(RegularityVerdict v)
{
    switch (v) {
    case RegularityVerdict::regular: return "regular";
    case RegularityVerdict::irregular: return "irregular";
    case RegularityVerdict::budget_exceeded: return "budget-exceeded";
    }
    return "unknown";
}

struct RegularityReport {
    RegularityVerdict verdict = RegularityVerdict::regular;
    std::uint64_t tuples_checked = 0;
    /// Part-index masks of the first violating sub-tuple.
    std::vector<std::uint64_t> witness;
    double witness_density = 0;
};

/// Checks |d(A_1, ..., A_k) - d| <= eps for every sub-tuple with |A_i| >= eps|V_i|.
/// Sub-tuples are enumerated exhaustively; each one costs a node of the budget.
inline RegularityReport check_regular(const KPartiteGraph & g, double eps, double d, const SearchBudget & budget = {})
{
    budget.validate();
    if (! (eps > 0) || d < 0)
        throw InvalidArgument("need eps > 0 and d >= 0");
    for (int s : g.sizes())
        if (s > 20)
            throw InvalidArgument("check_regular enumerates subsets; parts must have at most 20 vertices");
    const int k = g.k();
    std::vector<std::vector<std::uint64_t>> choices(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const int size = g.part_size(i);
        const auto min_size = static_cast<int>(std::ceil(eps * size - 1e-12));
        for (std::uint64_t m = 1; m < (std::uint64_t{1} << size); ++m)
            if (std::popcount(m) >= min_size)
                choices[static_cast<std::size_t>(i)].push_back(m);
    }
    const auto edges = g.edge_tuples();
    const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
    const auto t0 = detail::Clock::now();
    RegularityReport rep;
    std::vector<std::size_t> pick(static_cast<std::size_t>(k), 0);
    while (true) {
        if (rep.tuples_checked >= cap
            || (budget.time_limit && (rep.tuples_checked & 1023) == 0 && detail::seconds_since(t0) > *budget.time_limit)) {
            rep.verdict = RegularityVerdict::budget_exceeded;
            return rep;
        }
        ++rep.tuples_checked;
        long double prod = 1;
        for (int i = 0; i < k; ++i)
            prod *= std::popcount(choices[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]]);
        long double count = 0;
        for (const auto & idx : edges) {
            bool in = true;
            for (int i = 0; i < k && in; ++i)
                in = (choices[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]] >> idx[static_cast<std::size_t>(i)]) & 1U;
            count += in;
        }
        const long double dens = count / prod;
        if (std::fabs(static_cast<double>(dens) - d) > eps) {
            rep.verdict = RegularityVerdict::irregular;
            for (int i = 0; i < k; ++i)
                rep.witness.push_back(choices[static_cast<std::size_t>(i)][pick[static_cast<std::size_t>(i)]]);
            rep.witness_density = static_cast<double>(dens);
            return rep;
        }
        int i = k - 1;
        while (i >= 0 && ++pick[static_cast<std::size_t>(i)] == choices[static_cast<std::size_t>(i)].size())
            pick[static_cast<std::size_t>(i--)] = 0;
        if (i < 0)
            return rep;
    }
}

inline RegularityReport check_regular(const Hypergraph & h, const PartiteFamily & parts, double eps, double d,
                                      const SearchBudget & budget = {})
{
    return check_regular(KPartiteGraph::from_hypergraph(h, parts), eps, d, budget);
}

/// Color of 0-based position p in the infinite version of the path coloring.
inline int template_color(int p, int k, int ell)
{
    const int period = ell_cycle_s(k, ell) * (k - ell);
    auto is_k = [&](int q) { return q >= k - 1 && (q - (k - 1)) % period == 0; };
    if (is_k(p))
        return k;
    int before = p; // positions before p that are not color k
    if (p >= k - 1)
        before -= (p - (k - 1) + period - 1) / period;
    return before % (k - 1) + 1;
}

/// A canonical path in a KPartiteGraph, vertices as global ids.
struct CanonicalPath {
    OrderedPath path;
    int lambda = 0;
};

/// Greedy extension of a single canonical ell-path among the still-available
/// vertices: each new vertex is taken from the part its template color
/// prescribes, the first fitting choice in index order wins, and the path is
/// extended until it gets stuck, then cut back to a multiple of s edges.
inline std::optional<CanonicalPath> greedy_canonical_path(const KPartiteGraph & g, int ell, const std::vector<std::vector<char>> & available,
                                                          std::uint64_t node_cap = 1'000'000)
{
    const int k = g.k();
    const int s = ell_cycle_s(k, ell);
    const int step = k - ell;
    std::vector<std::vector<char>> free_now = available;
    std::vector<int> part_at;
    std::vector<int> index_at;
    std::uint64_t nodes = 0;

    auto window_ok = [&](int start) {
        std::vector<int> idx(static_cast<std::size_t>(k), -1);
        for (int p = start; p < start + k; ++p)
            idx[static_cast<std::size_t>(part_at[static_cast<std::size_t>(p)])] = index_at[static_cast<std::size_t>(p)];
        return g.has_edge(idx);
    };
    // Fills positions from `pos` to `upto` (exclusive); the window ending at upto-1 must be an edge.
    std::function<bool(int, int)> fill = [&](int pos, int upto) -> bool {
        if (pos == upto)
            return window_ok(upto - k);
        const int part = template_color(pos, k, ell) - 1;
        auto & pool = free_now[static_cast<std::size_t>(part)];
        for (int j = 0; j < g.part_size(part); ++j) {
            if (! pool[static_cast<std::size_t>(j)])
                continue;
            if (++nodes > node_cap)
                return false;
            pool[static_cast<std::size_t>(j)] = 0;
            part_at.push_back(part);
            index_at.push_back(j);
            if (fill(pos + 1, upto))
                return true;
            part_at.pop_back();
            index_at.pop_back();
            pool[static_cast<std::size_t>(j)] = 1;
        }
        return false;
    };

    if (! fill(0, k))
        return std::nullopt;
    int edges = 1;
    while (fill(static_cast<int>(part_at.size()), static_cast<int>(part_at.size()) + step))
        ++edges;
    const int lambda = edges / s;
    if (lambda == 0)
        return std::nullopt;
    const int order = ell + lambda * s * step;
    CanonicalPath out;
    out.lambda = lambda;
    out.path.k = k;
    out.path.ell = ell;
    for (int p = 0; p < order; ++p)
        out.path.vertices.push_back(g.global(part_at[static_cast<std::size_t>(p)], index_at[static_cast<std::size_t>(p)]));
    return out;
}

struct TilingReport {
    std::vector<CanonicalPath> paths;
    int uncovered = 0;
    int uncovered_last_part = 0;
    double bound = 0; // 3 s k^2 eps m
    bool stopped_by_threshold = false;
    [[nodiscard]] bool within_bound() const { return uncovered <= bound; }
};

/// Repeats the greedy canonical path search on the uncovered vertices until
/// fewer than 2 eps |V_k| vertices of the last part remain uncovered or no
/// further path exists.
inline TilingReport tile_with_canonical_paths(const KPartiteGraph & g, int ell, int m, double eps)
{
    const int k = g.k();
    std::vector<std::vector<char>> avail;
    for (int i = 0; i < k; ++i)
        avail.emplace_back(static_cast<std::size_t>(g.part_size(i)), 1);
    TilingReport rep;
    const int s = ell_cycle_s(k, ell);
    rep.bound = 3.0 * s * k * k * eps * m;
    auto uncovered_in = [&](int part) {
        return static_cast<int>(std::count(avail[static_cast<std::size_t>(part)].begin(), avail[static_cast<std::size_t>(part)].end(), 1));
    };
    while (true) {
        if (uncovered_in(k - 1) < 2 * eps * g.part_size(k - 1)) {
            rep.stopped_by_threshold = true;
            break;
        }
        auto p = greedy_canonical_path(g, ell, avail);
        if (! p)
            break;
        for (Vertex v : p->path.vertices)
            avail[static_cast<std::size_t>(g.part_of(v))][static_cast<std::size_t>(g.index_of(v))] = 0;
        rep.paths.push_back(std::move(*p));
    }
    for (int i = 0; i < k; ++i)
        rep.uncovered += uncovered_in(i);
    rep.uncovered_last_part = uncovered_in(k - 1);
    return rep;
}

/// Canonical test on global ids of a KPartiteGraph.
inline bool is_canonical(const OrderedPath & p, const KPartiteGraph & g)
{
    const int s = ell_cycle_s(p.k, p.ell);
    const int len = p.length();
    if (len < 1 || len % s != 0 || p.k != g.k())
        return false;
    std::vector<int> counts(static_cast<std::size_t>(g.k()), 0);
    for (Vertex v : p.vertices) {
        if (v < 0 || v >= g.vertex_count())
            throw InvalidArgument("path leaves the union of the parts");
        ++counts[static_cast<std::size_t>(g.part_of(v))];
    }
    if (counts.back() != len / s)
        return false;
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end() - 1);
    return *hi - *lo <= 1;
}

/// True iff every window of the path is a crossing edge of g.
inline bool path_in_kpartite(const OrderedPath & p, const KPartiteGraph & g)
{
    if (p.length() < 1)
        return false;
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v : p.vertices) {
        if (v < 0 || v >= g.vertex_count() || seen[static_cast<std::size_t>(v)])
            return false;
        seen[static_cast<std::size_t>(v)] = 1;
    }
    for (int i = 0; i < p.length(); ++i) {
        std::vector<int> idx(static_cast<std::size_t>(g.k()), -1);
        for (int q = i * p.step(); q < i * p.step() + p.k; ++q) {
            const Vertex v = p.vertices[static_cast<std::size_t>(q)];
            auto & slot = idx[static_cast<std::size_t>(g.part_of(v))];
            if (slot != -1)
                return false;
            slot = g.index_of(v);
        }
        if (! g.has_edge(idx))
            return false;
    }
    return true;
}

/// Description of a generated instance.
struct GeneratorSpec {
    std::string family = "complete"; // complete, space_barrier, random_uniform, barrier_plus_slack, kpartite_random
    int n = 0;
    int k = 3;
    int ell = 1;
    double p = 0.5;
    int slack = 0;
    int m = 1;
    std::optional<std::uint64_t> seed;
};

inline nlohmann::json to_json(const GeneratorSpec & g)
{
    nlohmann::json j = {{"family", g.family}, {"n", g.n}, {"k", g.k}, {"ell", g.ell}, {"p", g.p}, {"slack", g.slack}, {"m", g.m}};
    j["seed"] = g.seed ? nlohmann::json(*g.seed) : nlohmann::json(nullptr);
    return j;
}

inline GeneratorSpec generator_spec_from_json(const nlohmann::json & j)
{
    GeneratorSpec g;
    g.family = j.value("family", g.family);
    g.n = j.value("n", g.n);
    g.k = j.value("k", g.k);
    g.ell = j.value("ell", g.ell);
    g.p = j.value("p", g.p);
    g.slack = j.value("slack", g.slack);
    g.m = j.value("m", g.m);
    if (j.contains("seed") && ! j["seed"].is_null())
        g.seed = j["seed"].get<std::uint64_t>();
    return g;
}

struct GeneratedInstance {
    Hypergraph graph;
    PartiteFamily parts;
    std::uint64_t min_codegree = 0;
    std::optional<BarrierCertificate> certificate;
};

inline GeneratedInstance generate(const GeneratorSpec & spec)
{
    const bool random = spec.family == "random_uniform" || spec.family == "kpartite_random";
    if (random && ! spec.seed)
        throw InvalidArgument("family " + spec.family + " needs a seed");
    GeneratedInstance out;
    if (spec.family == "complete")
        out.graph = complete_hypergraph(spec.n, spec.k);
    else if (spec.family == "space_barrier" || spec.family == "barrier_plus_slack") {
        auto b = spec.family == "space_barrier" ? space_barrier(spec.n, spec.k, spec.ell)
                                                : barrier_plus_slack(spec.n, spec.k, spec.ell, spec.slack);
        out.graph = std::move(b.graph);
        out.certificate = b.certificate;
    }
    else if (spec.family == "random_uniform")
        out.graph = random_uniform(spec.n, spec.k, spec.p, *spec.seed);
    else if (spec.family == "kpartite_random") {
        auto [h, parts] = regular_tuple(spec.k, spec.ell, spec.m, spec.p, *spec.seed).to_hypergraph();
        out.graph = std::move(h);
        out.parts = std::move(parts);
    }
    else
        throw InvalidArgument("unknown generator family " + spec.family);
    out.min_codegree = out.graph.n() >= out.graph.k() ? min_ell_degree(out.graph, out.graph.k() - 1) : 0;
    return out;
}

} // namespace hamcycle

#endif // HAMCYCLE_CONSTRUCTIONS_HPP
