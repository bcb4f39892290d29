#ifndef HAMCYCLE_PATHS_HPP
#define HAMCYCLE_PATHS_HPP

#include <hamcycle/hypergraph.hpp>

#include <json.hpp>

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace hamcycle {

/// s = ceil(k / (k - ell)): the largest number of edges of an ell-cycle through one vertex.
[[nodiscard]] constexpr int ell_cycle_s(int k, int ell) { return (k + (k - ell) - 1) / (k - ell); }

/// Vertex sequence of an ell-path. Edge i (0-based) occupies positions i(k-ell) .. i(k-ell)+k-1.
struct OrderedPath {
    int k = 0;
    int ell = 0;
    std::vector<Vertex> vertices;

    [[nodiscard]] int step() const { return k - ell; }
    /// Number of edges when the length is well formed; -1 otherwise.
    [[nodiscard]] int length() const
    {
        const int m = static_cast<int>(vertices.size());
        if (step() <= 0 || m < k || (m - ell) % step() != 0)
            return -1;
        return (m - ell) / step();
    }
    [[nodiscard]] VertexSet edge(int i) const
    {
        VertexSet e;
        for (int p = i * step(); p < i * step() + k; ++p)
            e.insert(vertices[static_cast<std::size_t>(p)]);
        return e;
    }
    [[nodiscard]] VertexSet vertex_set() const { return VertexSet::from(vertices); }

    friend bool operator==(const OrderedPath &, const OrderedPath &) = default;
};

/// Cyclic vertex sequence. Edge j (0-based) occupies cyclic positions j(k-ell) .. j(k-ell)+k-1.
struct OrderedCycle {
    int k = 0;
    int ell = 0;
    std::vector<Vertex> vertices;

    [[nodiscard]] int step() const { return k - ell; }
    [[nodiscard]] int edge_count() const { return step() > 0 ? static_cast<int>(vertices.size()) / step() : 0; }
    [[nodiscard]] VertexSet edge(int j) const
    {
        const int n = static_cast<int>(vertices.size());
        VertexSet e;
        for (int p = 0; p < k; ++p)
            e.insert(vertices[static_cast<std::size_t>((j * step() + p) % n)]);
        return e;
    }

    friend bool operator==(const OrderedCycle &, const OrderedCycle &) = default;
};

enum class Violation {
    none,
    bad_parameters,
    bad_length,
    vertex_out_of_range,
    repeated_vertex,
    not_spanning,
    divisibility,
    missing_edge,
};

inline const char * to_string(Violation v)
{
    switch (v) {
    case Violation::none: return "none";
    case Violation::bad_parameters: return "bad-parameters";
    case Violation::bad_length: return "bad-length";
    case Violation::vertex_out_of_range: return "vertex-out-of-range";
    case Violation::repeated_vertex: return "repeated-vertex";
    case Violation::not_spanning: return "not-spanning";
    case Violation::divisibility: return "divisibility";
    case Violation::missing_edge: return "missing-edge";
    }
    return "unknown";
}

/// Checker result. edge_index is the 1-based index of the first missing edge, 0 otherwise.
struct Verdict {
    bool ok = true;
    Violation reason = Violation::none;
    int edge_index = 0;

    static Verdict accept() { return {}; }
    static Verdict reject(Violation why, int edge = 0) { return {false, why, edge}; }
    explicit operator bool() const { return ok; }
};

namespace detail {

    inline Verdict check_vertices(const Hypergraph & h, const std::vector<Vertex> & vs)
    {
        VertexSet seen;
        for (Vertex v : vs) {
            if (v < 0 || v >= h.n())
                return Verdict::reject(Violation::vertex_out_of_range);
            if (seen.contains(v))
                return Verdict::reject(Violation::repeated_vertex);
            seen.insert(v);
        }
        return Verdict::accept();
    }

} // namespace detail

/// Accepts iff P is a well-formed ell-path all of whose edges lie in H.
inline Verdict check_ell_path(const Hypergraph & h, const OrderedPath & p)
{
    if (p.k != h.k() || p.ell < 1 || p.ell >= p.k)
        return Verdict::reject(Violation::bad_parameters);
    if (p.length() < 1)
        return Verdict::reject(Violation::bad_length);
    if (auto v = detail::check_vertices(h, p.vertices); ! v)
        return v;
    for (int i = 0; i < p.length(); ++i)
        if (! h.has_edge(p.edge(i)))
            return Verdict::reject(Violation::missing_edge, i + 1);
    return Verdict::accept();
}

/// Accepts iff C visits every vertex of H once, (k - ell) | n, and every cyclic edge lies in H.
inline Verdict check_hamilton_ell_cycle(const Hypergraph & h, const OrderedCycle & c)
{
    if (c.k != h.k() || c.ell < 1 || c.ell >= c.k)
        return Verdict::reject(Violation::bad_parameters);
    if (h.n() % c.step() != 0)
        return Verdict::reject(Violation::divisibility);
    if (static_cast<int>(c.vertices.size()) != h.n())
        return Verdict::reject(Violation::not_spanning);
    if (auto v = detail::check_vertices(h, c.vertices); ! v)
        return v;
    // Below 2k-ell vertices consecutive windows wrap around and share more than ell vertices.
    if (h.n() < 2 * c.k - c.ell)
        return Verdict::reject(Violation::bad_length);
    for (int j = 0; j < c.edge_count(); ++j)
        if (! h.has_edge(c.edge(j)))
            return Verdict::reject(Violation::missing_edge, j + 1);
    return Verdict::accept();
}

inline std::vector<Vertex> reverse_end(std::vector<Vertex> end)
{
    if (VertexSet::from(end).size() != static_cast<int>(end.size()))
        throw InvalidArgument("end tuple has repeated vertices");
    std::reverse(end.begin(), end.end());
    return end;
}

/// The two ell-ends: (v_1, ..., v_ell) and (v_t, v_{t-1}, ..., v_{t-ell+1}).
inline std::pair<std::vector<Vertex>, std::vector<Vertex>> ends(const OrderedPath & p)
{
    const auto ell = static_cast<std::size_t>(p.ell);
    std::vector<Vertex> first(p.vertices.begin(), p.vertices.begin() + static_cast<std::ptrdiff_t>(ell));
    std::vector<Vertex> last(p.vertices.rbegin(), p.vertices.rbegin() + static_cast<std::ptrdiff_t>(ell));
    return {first, last};
}

inline OrderedPath reversed(OrderedPath p)
{
    std::reverse(p.vertices.begin(), p.vertices.end());
    return p;
}

/// Sub-path made of edges first .. first+count-1 (0-based).
inline OrderedPath subpath(const OrderedPath & p, int first, int count)
{
    if (first < 0 || count < 1 || first + count > p.length())
        throw InvalidArgument("subpath outside the path");
    const auto b = p.vertices.begin() + first * p.step();
    return {p.k, p.ell, std::vector<Vertex>(b, b + p.ell + count * p.step())};
}

/// Picks the lexicographically smallest sequence among all rotations by
/// multiples of (k - ell) and all reflections that keep edges aligned.
inline OrderedCycle normalized(const OrderedCycle & c)
{
    const int n = static_cast<int>(c.vertices.size());
    if (n == 0 || c.step() <= 0)
        return c;
    OrderedCycle best = c;
    std::vector<Vertex> cand(static_cast<std::size_t>(n));
    for (int reflect = 0; reflect < 2; ++reflect)
        for (int shift = 0; shift < n; shift += c.step()) {
            for (int p = 0; p < n; ++p) {
                // The reflection p -> k-1-p maps windows starting at multiples of the step onto such windows.
                const int src = reflect ? (((c.k - 1 - (p + shift)) % n) + n) % n : (p + shift) % n;
                cand[static_cast<std::size_t>(p)] = c.vertices[static_cast<std::size_t>(src)];
            }
            if (cand < best.vertices)
                best.vertices = cand;
        }
    return best;
}

/// Per-position colors in 1..k for a path colored as in the tiling argument.
struct PathColoring {
    std::vector<int> colors;
    int lambda = 0;
};

/// Colors positions k, k+s(k-ell), ..., k+(lambda-1)s(k-ell) (1-based) with k
/// and every other position with 1..k-1 cyclically. Needs a path of exactly lambda*s edges.
inline PathColoring color_path(const OrderedPath & p, int lambda)
{
    const int s = ell_cycle_s(p.k, p.ell);
    if (lambda < 1 || p.length() != lambda * s)
        throw InvalidArgument("color_path needs a path of length lambda * s with lambda >= 1");
    PathColoring out;
    out.lambda = lambda;
    out.colors.assign(p.vertices.size(), 0);
    for (int j = 0; j < lambda; ++j)
        out.colors[static_cast<std::size_t>(p.k - 1 + j * s * p.step())] = p.k;
    int next = 1;
    for (auto & c : out.colors)
        if (c == 0) {
            c = next;
            next = next % (p.k - 1) + 1;
        }
    return out;
}

/// Sizes of the color classes 1..k (index 0 unused).
inline std::vector<int> color_class_sizes(const PathColoring & c, int k)
{
    std::vector<int> sizes(static_cast<std::size_t>(k + 1), 0);
    for (int col : c.colors)
        ++sizes[static_cast<std::size_t>(col)];
    return sizes;
}

/// Checks the coloring invariants: color k used lambda times, the other
/// classes within one of each other, and every edge meets color k.
inline bool coloring_is_proper(const OrderedPath & p, const PathColoring & c)
{
    if (c.colors.size() != p.vertices.size())
        return false;
    for (int col : c.colors)
        if (col < 1 || col > p.k)
            return false;
    const auto sizes = color_class_sizes(c, p.k);
    if (sizes[static_cast<std::size_t>(p.k)] != c.lambda)
        return false;
    const auto [lo, hi] = std::minmax_element(sizes.begin() + 1, sizes.end() - 1);
    if (*hi - *lo > 1)
        return false;
    for (int i = 0; i < p.length(); ++i) {
        bool hit = false;
        for (int q = i * p.step(); q < i * p.step() + p.k; ++q)
            hit = hit || c.colors[static_cast<std::size_t>(q)] == p.k;
        if (! hit)
            return false;
    }
    return true;
}

/// True iff P meets the last part in lambda = length/s vertices and the other
/// parts in as equal numbers as possible.
inline bool is_canonical(const OrderedPath & p, const PartiteFamily & parts)
{
    if (static_cast<int>(parts.size()) != p.k)
        throw InvalidArgument("is_canonical needs k parts");
    VertexSet all;
    for (VertexSet part : parts)
        all |= part;
    const VertexSet vp = p.vertex_set();
    if (! vp.subset_of(all))
        throw InvalidArgument("path leaves the union of the parts");
    const int s = ell_cycle_s(p.k, p.ell);
    const int len = p.length();
    if (len < 1 || len % s != 0)
        return false;
    if ((vp & parts.back()).size() != len / s)
        return false;
    int lo = p.k * 64;
    int hi = -1;
    for (int j = 0; j + 1 < p.k; ++j) {
        const int c = (vp & parts[static_cast<std::size_t>(j)]).size();
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    return hi - lo <= 1;
}

inline nlohmann::json to_json(const OrderedPath & p) { return {{"k", p.k}, {"ell", p.ell}, {"vertices", p.vertices}}; }
inline nlohmann::json to_json(const OrderedCycle & c) { return {{"k", c.k}, {"ell", c.ell}, {"vertices", c.vertices}}; }

inline nlohmann::json to_json(const Verdict & v)
{
    return {{"ok", v.ok}, {"reason", to_string(v.reason)}, {"edge_index", v.edge_index}};
}

inline OrderedPath path_from_json(const nlohmann::json & j)
{
    return {j.at("k").get<int>(), j.at("ell").get<int>(), j.at("vertices").get<std::vector<Vertex>>()};
}

inline OrderedCycle cycle_from_json(const nlohmann::json & j)
{
    return {j.at("k").get<int>(), j.at("ell").get<int>(), j.at("vertices").get<std::vector<Vertex>>()};
}

} // namespace hamcycle

#endif // HAMCYCLE_PATHS_HPP
