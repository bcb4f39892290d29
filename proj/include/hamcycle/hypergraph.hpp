#ifndef HAMCYCLE_HYPERGRAPH_HPP
#define HAMCYCLE_HYPERGRAPH_HPP

#include <hamcycle/vertex_set.hpp>

#include <boost/rational.hpp>

#include <algorithm>
#include <atomic>
#include <limits>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hamcycle {

using Rational = boost::rational<long long>;

/// Ordered list of pairwise disjoint vertex sets (V_1, ..., V_k).
using PartiteFamily = std::vector<VertexSet>;

/// k-uniform hypergraph on vertices 0..n-1.
///
/// Edge membership is backed by a hash set, plus a bitset over colex ranks
/// when n <= 24. The co-degree index and the sorted edge list are built on
/// first use and dropped on mutation; building them is thread safe, so a
/// const Hypergraph can be shared by parallel readers.
class Hypergraph {
public:
    static constexpr int kDenseLimit = 24;

    Hypergraph() : Hypergraph(0, 2) {}

    Hypergraph(int n, int k) : n_(n), k_(k)
    {
        if (n < 0 || n > kMaxVertices)
            throw InvalidArgument("vertex count must lie in 0..64, got " + std::to_string(n));
        if (k < 2)
            throw InvalidArgument("uniformity must be at least 2, got " + std::to_string(k));
        if (n <= kDenseLimit && k <= n)
            dense_.assign((binom(n, k) + 63) / 64, 0);
    }

    Hypergraph(int n, int k, const std::vector<VertexSet> & edges) : Hypergraph(n, k)
    {
        for (VertexSet e : edges)
            add_edge(e);
    }

    Hypergraph(const Hypergraph & o) : n_(o.n_), k_(o.k_), edges_(o.edges_), dense_(o.dense_) {}
    Hypergraph(Hypergraph && o) noexcept
        : n_(o.n_), k_(o.k_), edges_(std::move(o.edges_)), dense_(std::move(o.dense_))
    {
    }
    Hypergraph & operator=(const Hypergraph & o)
    {
        if (this != &o) {
            n_ = o.n_;
            k_ = o.k_;
            edges_ = o.edges_;
            dense_ = o.dense_;
            invalidate();
        }
        return *this;
    }
    Hypergraph & operator=(Hypergraph && o) noexcept
    {
        n_ = o.n_;
        k_ = o.k_;
        edges_ = std::move(o.edges_);
        dense_ = std::move(o.dense_);
        invalidate();
        return *this;
    }

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int k() const { return k_; }
    [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
    [[nodiscard]] VertexSet vertices() const { return VertexSet::range(n_); }

    /// Inserts e; returns false if it was already present.
    bool add_edge(VertexSet e)
    {
        validate_edge(e);
        if (! edges_.insert(e).second)
            return false;
        if (! dense_.empty()) {
            const auto r = colex_rank(e);
            dense_[r / 64] |= std::uint64_t{1} << (r % 64);
        }
        invalidate();
        return true;
    }

    bool add_edge(std::initializer_list<Vertex> vs) { return add_edge(VertexSet::of(vs)); }

    bool remove_edge(VertexSet e)
    {
        if (edges_.erase(e) == 0)
            return false;
        if (! dense_.empty()) {
            const auto r = colex_rank(e);
            dense_[r / 64] &= ~(std::uint64_t{1} << (r % 64));
        }
        invalidate();
        return true;
    }

    /// Membership test without validation; any set of the wrong size is a non-edge.
    [[nodiscard]] bool has_edge(VertexSet e) const
    {
        if (e.size() != k_ || ! e.within_range(n_))
            return false;
        if (! dense_.empty()) {
            const auto r = colex_rank(e);
            return (dense_[r / 64] >> (r % 64)) & 1U;
        }
        return edges_.contains(e);
    }

    /// Edges in lexicographic order of their sorted tuples.
    [[nodiscard]] const std::vector<VertexSet> & edges() const
    {
        auto cur = std::atomic_load_explicit(&sorted_, std::memory_order_acquire);
        if (cur)
            return *cur;
        std::lock_guard lock(*mutex_);
        cur = std::atomic_load_explicit(&sorted_, std::memory_order_acquire);
        if (cur)
            return *cur;
        auto built = std::make_shared<std::vector<VertexSet>>(edges_.begin(), edges_.end());
        std::sort(built->begin(), built->end(), [](VertexSet a, VertexSet b) { return lex_less(a, b); });
        std::atomic_store_explicit(&sorted_, std::shared_ptr<const std::vector<VertexSet>>(built), std::memory_order_release);
        return *built;
    }

    /// Number of vertices completing the (k-1)-set S to an edge. Uses the lazy index.
    [[nodiscard]] int codegree(VertexSet s) const
    {
        const auto & idx = codegree_index();
        const auto it = idx.find(s);
        return it == idx.end() ? 0 : it->second;
    }

    /// Map from (k-1)-sets with positive co-degree to their co-degree.
    [[nodiscard]] const std::unordered_map<VertexSet, int, VertexSetHash> & codegree_index() const
    {
        auto cur = std::atomic_load_explicit(&codeg_, std::memory_order_acquire);
        if (cur)
            return *cur;
        std::lock_guard lock(*mutex_);
        cur = std::atomic_load_explicit(&codeg_, std::memory_order_acquire);
        if (cur)
            return *cur;
        auto built = std::make_shared<std::unordered_map<VertexSet, int, VertexSetHash>>();
        for (VertexSet e : edges_)
            e.for_each([&](Vertex v) { ++(*built)[e.without(v)]; });
        std::atomic_store_explicit(&codeg_, std::shared_ptr<const std::unordered_map<VertexSet, int, VertexSetHash>>(built),
                                   std::memory_order_release);
        return *built;
    }

    [[nodiscard]] bool codegree_index_built() const { return std::atomic_load(&codeg_) != nullptr; }

    /// Sub-hypergraph induced on `keep`, vertices relabelled 0..|keep|-1 in increasing order.
    [[nodiscard]] Hypergraph induced(VertexSet keep) const
    {
        std::vector<int> relabel(static_cast<std::size_t>(n_), -1);
        int next = 0;
        keep.for_each([&](Vertex v) { relabel[static_cast<std::size_t>(v)] = next++; });
        Hypergraph out(next, k_);
        for (VertexSet e : edges_) {
            if (! e.subset_of(keep))
                continue;
            VertexSet m;
            e.for_each([&](Vertex v) { m.insert(relabel[static_cast<std::size_t>(v)]); });
            out.add_edge(m);
        }
        return out;
    }

    /// Image under the vertex permutation v -> perm[v].
    [[nodiscard]] Hypergraph relabelled(const std::vector<Vertex> & perm) const
    {
        if (static_cast<int>(perm.size()) != n_)
            throw InvalidArgument("permutation size differs from vertex count");
        Hypergraph out(n_, k_);
        for (VertexSet e : edges_) {
            VertexSet m;
            e.for_each([&](Vertex v) { m.insert(perm[static_cast<std::size_t>(v)]); });
            out.add_edge(m);
        }
        return out;
    }

    friend bool operator==(const Hypergraph & a, const Hypergraph & b)
    {
        return a.n_ == b.n_ && a.k_ == b.k_ && a.edges_ == b.edges_;
    }

    void validate_set(VertexSet s, const char * what) const
    {
        if (! s.within_range(n_))
            throw InvalidArgument(std::string(what) + " " + to_string(s) + " leaves vertex range 0.." + std::to_string(n_ - 1));
    }

private:
    void validate_edge(VertexSet e) const
    {
        if (e.size() != k_)
            throw InvalidArgument("edge " + to_string(e) + " does not have " + std::to_string(k_) + " distinct vertices");
        validate_set(e, "edge");
    }

    void invalidate()
    {
        std::atomic_store(&sorted_, std::shared_ptr<const std::vector<VertexSet>>());
        std::atomic_store(&codeg_, std::shared_ptr<const std::unordered_map<VertexSet, int, VertexSetHash>>());
    }

    int n_;
    int k_;
    std::unordered_set<VertexSet, VertexSetHash> edges_;
    std::vector<std::uint64_t> dense_;
    mutable std::shared_ptr<const std::vector<VertexSet>> sorted_;
    mutable std::shared_ptr<const std::unordered_map<VertexSet, int, VertexSetHash>> codeg_;
    std::unique_ptr<std::mutex> mutex_ = std::make_unique<std::mutex>();
};

/// Builds a hypergraph from vertex tuples (any order within a tuple).
inline Hypergraph make_hypergraph(int n, int k, const std::vector<std::vector<Vertex>> & edges)
{
    Hypergraph h(n, k);
    for (const auto & e : edges) {
        const VertexSet s = VertexSet::from(e);
        if (static_cast<int>(e.size()) != k || s.size() != k)
            throw InvalidArgument("edge with repeated or missing vertices");
        h.add_edge(s);
    }
    return h;
}

/// deg_H(S): number of edges containing S.
inline std::uint64_t degree(const Hypergraph & h, VertexSet s)
{
    if (s.size() >= h.k())
        throw InvalidQuery("degree needs |S| < k, got |S| = " + std::to_string(s.size()));
    h.validate_set(s, "set");
    if (s.size() == h.k() - 1)
        return static_cast<std::uint64_t>(h.codegree(s));
    std::uint64_t c = 0;
    for (VertexSet e : h.edges())
        c += s.subset_of(e);
    return c;
}

/// For each r-subset of Z contained in some edge inside Z, the number of such edges.
inline std::unordered_map<VertexSet, std::uint64_t, VertexSetHash> subset_degrees_within(const Hypergraph & h, VertexSet z, int r)
{
    std::unordered_map<VertexSet, std::uint64_t, VertexSetHash> out;
    for (VertexSet e : h.edges())
        if (e.subset_of(z))
            for_each_combination(e, r, [&](VertexSet sub) { ++out[sub]; });
    return out;
}

/// delta_ell(H): minimum degree over all ell-subsets of V.
inline std::uint64_t min_ell_degree(const Hypergraph & h, int ell)
{
    if (ell < 1 || ell >= h.k())
        throw InvalidArgument("ell must satisfy 1 <= ell < k");
    if (h.n() < ell)
        return 0;
    const std::uint64_t total = binom(h.n(), ell);
    if (ell == h.k() - 1) {
        const auto & idx = h.codegree_index();
        if (idx.size() < total)
            return 0;
        int best = std::numeric_limits<int>::max();
        for (const auto & [set, c] : idx)
            best = std::min(best, c);
        return static_cast<std::uint64_t>(best);
    }
    const auto counts = subset_degrees_within(h, h.vertices(), ell);
    if (counts.size() < total)
        return 0;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const auto & [set, c] : counts)
        best = std::min(best, c);
    return best;
}

/// e_H(A): number of edges inside A.
inline std::uint64_t induced_edge_count(const Hypergraph & h, VertexSet a)
{
    h.validate_set(a, "set");
    std::uint64_t c = 0;
    for (VertexSet e : h.edges())
        c += e.subset_of(a);
    return c;
}

inline void validate_partite(const Hypergraph & h, const PartiteFamily & parts)
{
    VertexSet seen;
    for (VertexSet p : parts) {
        h.validate_set(p, "part");
        if (! p.disjoint_from(seen))
            throw InvalidArgument("parts are not pairwise disjoint");
        seen |= p;
    }
}

/// Number of edges with exactly one vertex in each part.
inline std::uint64_t crossing_edge_count(const Hypergraph & h, const PartiteFamily & parts)
{
    std::uint64_t c = 0;
    for (VertexSet e : h.edges()) {
        bool ok = true;
        for (VertexSet p : parts)
            if ((e & p).size() != 1) {
                ok = false;
                break;
            }
        c += ok;
    }
    return c;
}

/// d(A_1, ..., A_k): crossing edges over the product of part sizes.
inline Rational density(const Hypergraph & h, const PartiteFamily & parts)
{
    if (static_cast<int>(parts.size()) != h.k())
        throw InvalidArgument("density needs exactly k parts");
    validate_partite(h, parts);
    long long product = 1;
    for (VertexSet p : parts) {
        if (p.empty())
            throw InvalidArgument("density of a family with an empty part");
        product *= p.size();
    }
    return Rational(static_cast<long long>(crossing_edge_count(h, parts)), product);
}

/// One entry of a degree pattern: the edge meets `set` in exactly `count` vertices.
struct PatternPart {
    VertexSet set;
    int count = 0;
};

using DegreePattern = std::vector<PatternPart>;

inline void validate_pattern(const Hypergraph & h, VertexSet s, const DegreePattern & pattern)
{
    h.validate_set(s, "set");
    int total = 0;
    VertexSet seen;
    for (const auto & part : pattern) {
        h.validate_set(part.set, "pattern set");
        if (! part.set.disjoint_from(seen))
            throw InvalidArgument("pattern sets are not pairwise disjoint");
        seen |= part.set;
        if (part.count < 0)
            throw InvalidArgument("negative pattern count");
        if ((s & part.set).size() > part.count)
            throw InvalidArgument("pattern count smaller than the part of S it contains");
        total += part.count;
    }
    if (total != h.k())
        throw InvalidArgument("pattern counts sum to " + std::to_string(total) + ", expected k = " + std::to_string(h.k()));
    if (! s.subset_of(seen))
        throw InvalidArgument("S is not covered by the pattern sets");
}

/// deg(S, X_1^{c_1} ... X_m^{c_m}): edges containing S that meet each X_i in exactly c_i vertices.
inline std::uint64_t degree_into(const Hypergraph & h, VertexSet s, const DegreePattern & pattern)
{
    validate_pattern(h, s, pattern);
    std::uint64_t c = 0;
    for (VertexSet e : h.edges()) {
        if (! s.subset_of(e))
            continue;
        bool ok = true;
        for (const auto & part : pattern)
            if ((e & part.set).size() != part.count) {
                ok = false;
                break;
            }
        c += ok;
    }
    return c;
}

/// Number of k-sets containing S that conform to the pattern.
inline std::uint64_t pattern_total(VertexSet s, const DegreePattern & pattern)
{
    std::uint64_t t = 1;
    for (const auto & part : pattern) {
        const int inside = (s & part.set).size();
        t *= binom(part.set.size() - inside, part.count - inside);
    }
    return t;
}

/// Non-edges counterpart of degree_into.
inline std::uint64_t nondegree_into(const Hypergraph & h, VertexSet s, const DegreePattern & pattern)
{
    return pattern_total(s, pattern) - degree_into(h, s, pattern);
}

/// deg(S, Z): number of (k-|S|)-sets Y inside Z \ S with S u Y an edge.
inline std::uint64_t degree_within(const Hypergraph & h, VertexSet s, VertexSet z)
{
    if (s.size() >= h.k())
        throw InvalidQuery("degree needs |S| < k");
    h.validate_set(s, "set");
    h.validate_set(z, "set");
    const VertexSet allowed = z | s;
    std::uint64_t c = 0;
    for (VertexSet e : h.edges())
        c += s.subset_of(e) && e.subset_of(allowed);
    return c;
}

inline std::uint64_t nondegree_within(const Hypergraph & h, VertexSet s, VertexSet z)
{
    return binom((z - s).size(), h.k() - s.size()) - degree_within(h, s, z);
}

/// Link of v restricted to `within`: the (k-1)-sets e \ {v} for edges e through v inside within u {v}.
inline std::vector<VertexSet> link(const Hypergraph & h, Vertex v, VertexSet within)
{
    std::vector<VertexSet> out;
    const VertexSet allowed = within.with(v);
    for (VertexSet e : h.edges())
        if (e.contains(v) && e.subset_of(allowed))
            out.push_back(e.without(v));
    return out;
}

} // namespace hamcycle

#endif // HAMCYCLE_HYPERGRAPH_HPP
