#ifndef HAMCYCLE_EXTREMAL_HPP
#define HAMCYCLE_EXTREMAL_HPP

#include <hamcycle/constructions.hpp>
#include <hamcycle/hypergraph.hpp>
#include <hamcycle/paths.hpp>
#include <hamcycle/search.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hamcycle {

/// Arbitrary precision rational used for the goodness parameters.
using Exact = boost::multiprecision::cpp_rational;

inline Exact exact(std::uint64_t v) { return Exact(boost::multiprecision::cpp_int(v)); }

inline Exact exact_pow(Exact base, int e)
{
    Exact r = 1;
    for (int i = 0; i < e; ++i)
        r *= base;
    return r;
}

inline std::uint64_t factorial(int k)
{
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i)
        f *= static_cast<std::uint64_t>(i);
    return f;
}

/// floor(q) for q >= 0.
inline std::uint64_t floor_nonneg(const Exact & q)
{
    if (q < 0)
        throw InvalidArgument("floor of a negative value");
    const boost::multiprecision::cpp_int f = boost::multiprecision::numerator(q) / boost::multiprecision::denominator(q);
    return f.convert_to<std::uint64_t>();
}

/// ceil(q) for q >= 0.
inline std::uint64_t ceil_nonneg(const Exact & q)
{
    const std::uint64_t f = floor_nonneg(q);
    return exact(f) == q ? f : f + 1;
}

inline std::string to_string(const Exact & q) { return q.str(); }

/// Parses "a", "-a", "a/b", "1.25" or "3e-2" exactly.
inline Exact parse_exact(const std::string & text)
{
    using boost::multiprecision::cpp_int;
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const Exact num = parse_exact(text.substr(0, slash));
        const Exact den = parse_exact(text.substr(slash + 1));
        if (den == 0)
            throw InvalidArgument("zero denominator in " + text);
        return num / den;
    }
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+'))
        negative = text[i++] == '-';
    cpp_int digits = 0;
    int scale = 0;
    bool any = false;
    bool after_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits = digits * 10 + (c - '0');
            any = true;
            if (after_point)
                --scale;
        }
        else if (c == '.' && ! after_point)
            after_point = true;
        else
            break;
    }
    if (! any)
        throw InvalidArgument("not a number: " + text);
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        try {
            scale += std::stoi(text.substr(i + 1));
        }
        catch (const std::exception &) {
            throw InvalidArgument("bad exponent in " + text);
        }
        i = text.size();
    }
    if (i != text.size())
        throw InvalidArgument("trailing characters in " + text);
    Exact q(digits);
    const Exact ten = 10;
    for (; scale > 0; --scale)
        q *= ten;
    for (; scale < 0; ++scale)
        q /= ten;
    return negative ? Exact(-q) : q;
}

inline Exact exact_from_json(const nlohmann::json & j)
{
    if (j.is_string())
        return parse_exact(j.get<std::string>());
    if (j.is_number_integer())
        return Exact(j.get<long long>());
    if (j.is_number())
        return parse_exact(j.dump());
    throw InvalidArgument("expected a number or a rational string");
}

/// Delta, eps0, eps1, eps2 and s for one (k, ell).
struct GoodnessParams {
    int k = 0;
    int ell = 0;
    int s = 0;
    std::string mode = "desk"; // desk, cascade, custom
    Exact delta;
    Exact eps0;
    Exact eps1;
    Exact eps2;

    [[nodiscard]] int step() const { return k - ell; }
    [[nodiscard]] Exact threshold(int n) const { return Exact(n) / Exact(s * step()); }
    /// floor((1 - 1/(s(k-ell))) n)
    [[nodiscard]] int b_size(int n) const { return n - (n + s * step() - 1) / (s * step()); }
    [[nodiscard]] int a_size(int n) const { return n - b_size(n); }

    /// 2 k! Delta (1 - 1/(s(k-ell)))^{-k}
    [[nodiscard]] Exact eps0_from_delta() const
    {
        const Exact frac = Exact(1) - Exact(1) / Exact(s * step());
        return Exact(2) * exact(factorial(k)) * delta / exact_pow(frac, k);
    }
    [[nodiscard]] bool eps2_relation() const { return eps2 == Exact(2) * eps1 * eps1; }
    [[nodiscard]] bool eps0_relation() const { return eps0 == exact_pow(eps1, 4); }
    [[nodiscard]] bool delta_relation() const { return eps0 == eps0_from_delta(); }

    void validate() const
    {
        if (k < 3 || ell < 1 || ell >= k)
            throw InvalidArgument("parameters need k >= 3 and 1 <= ell < k");
        if (s != ell_cycle_s(k, ell))
            throw InvalidArgument("s does not match ceil(k/(k-ell))");
        for (const Exact * v : {&delta, &eps0, &eps1, &eps2})
            if (! (*v > 0 && *v < 1))
                throw InvalidArgument("Delta and the eps values must lie in (0, 1)");
    }

    /// eps0 = eps1^4, eps2 = 2 eps1^2, Delta solved from eps0.
    static GoodnessParams cascade(int k, int ell, const Exact & eps1)
    {
        GoodnessParams p;
        p.k = k;
        p.ell = ell;
        p.s = ell_cycle_s(k, ell);
        p.mode = "cascade";
        p.eps1 = eps1;
        p.eps0 = exact_pow(eps1, 4);
        p.eps2 = Exact(2) * eps1 * eps1;
        const Exact frac = Exact(1) - Exact(1) / Exact(p.s * (k - ell));
        p.delta = p.eps0 * exact_pow(frac, k) / (Exact(2) * exact(factorial(k)));
        p.validate();
        return p;
    }

    /// Default finite-n profile: eps1 = 3/10, eps2 = 9/50, eps0 = 81/10000.
    static GoodnessParams desk(int k, int ell)
    {
        GoodnessParams p = cascade(k, ell, Exact(3) / Exact(10));
        p.mode = "desk";
        return p;
    }

    /// Free choice; Delta defaults to the value solved from eps0.
    static GoodnessParams custom(int k, int ell, const Exact & eps0, const Exact & eps1, const Exact & eps2,
                                 std::optional<Exact> delta = std::nullopt)
    {
        GoodnessParams p;
        p.k = k;
        p.ell = ell;
        p.s = ell_cycle_s(k, ell);
        p.mode = "custom";
        p.eps0 = eps0;
        p.eps1 = eps1;
        p.eps2 = eps2;
        if (delta)
            p.delta = *delta;
        else {
            const Exact frac = Exact(1) - Exact(1) / Exact(p.s * (k - ell));
            p.delta = eps0 * exact_pow(frac, k) / (Exact(2) * exact(factorial(k)));
        }
        p.validate();
        return p;
    }
};

inline nlohmann::json to_json(const GoodnessParams & p)
{
    return {{"mode", p.mode},
            {"k", p.k},
            {"ell", p.ell},
            {"s", p.s},
            {"delta", to_string(p.delta)},
            {"eps0", to_string(p.eps0)},
            {"eps1", to_string(p.eps1)},
            {"eps2", to_string(p.eps2)},
            {"relations",
             {{"eps2_is_2eps1_squared", p.eps2_relation()},
              {"eps0_is_eps1_fourth", p.eps0_relation()},
              {"eps0_matches_delta", p.delta_relation()}}}};
}

/// Reads {"mode": "desk"}, {"mode": "cascade", "eps1": "2/5"} or
/// {"mode": "custom", "eps0": .., "eps1": .., "eps2": .., "delta": ..}.
inline GoodnessParams goodness_params_from_json(const nlohmann::json & j, int k, int ell)
{
    const std::string mode = j.value("mode", std::string("desk"));
    if (mode == "desk")
        return GoodnessParams::desk(k, ell);
    if (mode == "cascade") {
        if (! j.contains("eps1"))
            throw InvalidArgument("cascade mode needs eps1");
        return GoodnessParams::cascade(k, ell, exact_from_json(j["eps1"]));
    }
    if (mode == "custom") {
        for (const char * key : {"eps0", "eps1", "eps2"})
            if (! j.contains(key))
                throw InvalidArgument(std::string("custom mode needs ") + key);
        std::optional<Exact> delta;
        if (j.contains("delta"))
            delta = exact_from_json(j["delta"]);
        return GoodnessParams::custom(k, ell, exact_from_json(j["eps0"]), exact_from_json(j["eps1"]),
                                      exact_from_json(j["eps2"]), delta);
    }
    throw InvalidArgument("unknown parameter mode " + mode);
}

// ---------------------------------------------------------------------------
// Partition of minimum e(B)

enum class PartitionMode { exhaustive, local_search };

inline const char * to_string(PartitionMode m) { return m == PartitionMode::exhaustive ? "exhaustive" : "local-search"; }

struct ExtremalPartition {
    VertexSet a;
    VertexSet b;
    std::uint64_t eb = 0;
    PartitionMode mode = PartitionMode::exhaustive;
};

inline nlohmann::json to_json(const ExtremalPartition & p)
{
    return {{"A", p.a.members()}, {"B", p.b.members()}, {"eB", p.eb}, {"mode", to_string(p.mode)}};
}

struct MinimizeOptions {
    /// Unset: exhaustive when the number of candidate sets is at most exhaustive_limit.
    std::optional<PartitionMode> mode;
    std::uint64_t exhaustive_limit = 50000;
    int restarts = 32;
    std::uint64_t seed = 0;
};

namespace detail {

    inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag)
    {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    inline std::vector<std::uint64_t> edge_masks(const Hypergraph & h)
    {
        std::vector<std::uint64_t> out;
        out.reserve(h.edge_count());
        for (VertexSet e : h.edges())
            out.push_back(e.bits());
        return out;
    }

    inline std::uint64_t count_avoiding(const std::vector<std::uint64_t> & masks, std::uint64_t a)
    {
        std::uint64_t c = 0;
        for (std::uint64_t m : masks)
            c += (m & a) == 0;
        return c;
    }

    inline ExtremalPartition local_search(const Hypergraph & h, int b_size, const MinimizeOptions & opt)
    {
        const int n = h.n();
        const auto masks = edge_masks(h);
        std::optional<ExtremalPartition> best;
        for (int r = 0; r < std::max(1, opt.restarts); ++r) {
            std::mt19937_64 rng(mix_seed(opt.seed, static_cast<std::uint64_t>(r)));
            std::vector<Vertex> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            VertexSet b = VertexSet::from(std::span<const Vertex>(perm.data(), static_cast<std::size_t>(b_size)));
            std::uint64_t eb = count_avoiding(masks, (h.vertices() - b).bits());
            for (;;) {
                // deg_B(v) for every v (edges inside B u {v} through v) and, for
                // a outside B, the number of those edges that also contain b.
                std::vector<std::int64_t> deg(static_cast<std::size_t>(n), 0);
                std::vector<std::int64_t> pair(static_cast<std::size_t>(n * n), 0);
                for (std::uint64_t m : masks) {
                    const VertexSet e = VertexSet(m);
                    const VertexSet out = e - b;
                    if (out.empty())
                        e.for_each([&](Vertex v) { ++deg[static_cast<std::size_t>(v)]; });
                    else if (out.size() == 1) {
                        const Vertex a = out.min();
                        ++deg[static_cast<std::size_t>(a)];
                        (e & b).for_each([&](Vertex v) { ++pair[static_cast<std::size_t>(a * n + v)]; });
                    }
                }
                std::int64_t best_gain = 0;
                Vertex out_v = -1;
                Vertex in_v = -1;
                b.for_each([&](Vertex bv) {
                    (h.vertices() - b).for_each([&](Vertex av) {
                        const std::int64_t after = deg[static_cast<std::size_t>(av)] - pair[static_cast<std::size_t>(av * n + bv)];
                        const std::int64_t gain = deg[static_cast<std::size_t>(bv)] - after;
                        if (gain > best_gain) {
                            best_gain = gain;
                            out_v = bv;
                            in_v = av;
                        }
                    });
                });
                if (best_gain <= 0)
                    break;
                b = b.without(out_v).with(in_v);
                eb -= static_cast<std::uint64_t>(best_gain);
            }
            if (! best || eb < best->eb || (eb == best->eb && lex_less(b, best->b)))
                best = ExtremalPartition{h.vertices() - b, b, eb, PartitionMode::local_search};
        }
        return *best;
    }

} // namespace detail

/// Partition with |B| = floor((1 - 1/(s(k-ell))) n) of smallest e(B); ties go
/// to the lexicographically smallest B.
inline ExtremalPartition minimize_eB(const Hypergraph & h, const GoodnessParams & params, const MinimizeOptions & opt = {})
{
    if (h.k() != params.k)
        throw InvalidArgument("parameters are for a different uniformity");
    const int b_size = params.b_size(h.n());
    const int a_size = h.n() - b_size;
    const std::uint64_t candidates = binom(h.n(), a_size);
    const PartitionMode mode = opt.mode.value_or(candidates <= opt.exhaustive_limit ? PartitionMode::exhaustive
                                                                                     : PartitionMode::local_search);
    if (mode == PartitionMode::local_search)
        return detail::local_search(h, b_size, opt);
    if (candidates > opt.exhaustive_limit)
        throw InvalidArgument("exhaustive partition search over " + std::to_string(candidates) + " sets exceeds the limit");
    const auto masks = detail::edge_masks(h);
    std::optional<ExtremalPartition> best;
    for_each_combination(h.vertices(), a_size, [&](VertexSet a) {
        const std::uint64_t eb = detail::count_avoiding(masks, a.bits());
        const VertexSet b = h.vertices() - a;
        if (! best || eb < best->eb || (eb == best->eb && lex_less(b, best->b)))
            best = ExtremalPartition{a, b, eb, PartitionMode::exhaustive};
    });
    return *best;
}

/// Wraps a caller-chosen B after checking its size.
inline ExtremalPartition partition_from(const Hypergraph & h, const GoodnessParams & params, VertexSet b)
{
    h.validate_set(b, "B");
    if (b.size() != params.b_size(h.n()))
        throw InvalidArgument("|B| = " + std::to_string(b.size()) + " but the prescribed size is " +
                              std::to_string(params.b_size(h.n())));
    return {h.vertices() - b, b, induced_edge_count(h, b), PartitionMode::exhaustive};
}

struct DeltaExtremality {
    bool extremal = false;
    ExtremalPartition witness;
    Exact bound;             // Delta n^k
    bool eps0_relation = false; // e(B) <= eps0 C(|B|, k)
};

inline nlohmann::json to_json(const DeltaExtremality & d)
{
    return {{"extremal", d.extremal},
            {"witness", to_json(d.witness)},
            {"delta_bound", to_string(d.bound)},
            {"eps0_relation", d.eps0_relation}};
}

inline DeltaExtremality is_delta_extremal(const Hypergraph & h, const GoodnessParams & params, const MinimizeOptions & opt = {})
{
    DeltaExtremality out;
    out.witness = minimize_eB(h, params, opt);
    out.bound = params.delta * exact_pow(Exact(h.n()), h.k());
    out.extremal = exact(out.witness.eb) <= out.bound;
    out.eps0_relation = exact(out.witness.eb) <= params.eps0 * exact(binom(out.witness.b.size(), h.k()));
    return out;
}

// ---------------------------------------------------------------------------
// Classification and goodness

struct Classification {
    VertexSet a;
    VertexSet b;
    VertexSet a_prime;
    VertexSet b_prime;
    VertexSet v0;
    int q = 0; // |A n B'|
    std::vector<std::uint64_t> deg_b; // deg(v, B) per vertex
    std::uint64_t a_prime_min = 0;    // ceil((1 - eps1) C(|B|, k-1))
    std::uint64_t b_prime_max = 0;    // floor(eps1 C(|B|, k-1))
};

inline nlohmann::json to_json(const Classification & c)
{
    return {{"A_prime", c.a_prime.members()},
            {"B_prime", c.b_prime.members()},
            {"V0", c.v0.members()},
            {"q", c.q},
            {"a_prime_min_degree", c.a_prime_min},
            {"b_prime_max_degree", c.b_prime_max}};
}

/// deg(v, B) for every vertex: edges inside B u {v} through v.
inline std::vector<std::uint64_t> degrees_into(const Hypergraph & h, VertexSet b)
{
    std::vector<std::uint64_t> deg(static_cast<std::size_t>(h.n()), 0);
    for (VertexSet e : h.edges()) {
        const VertexSet out = e - b;
        if (out.empty())
            e.for_each([&](Vertex v) { ++deg[static_cast<std::size_t>(v)]; });
        else if (out.size() == 1)
            ++deg[static_cast<std::size_t>(out.min())];
    }
    return deg;
}

inline Classification classify(const Hypergraph & h, const ExtremalPartition & p, const GoodnessParams & params)
{
    if (! (params.eps1 < Exact(1, 2)))
        throw InvalidArgument("classification needs eps1 < 1/2 so that A' and B' are disjoint");
    Classification c;
    c.a = p.a;
    c.b = p.b;
    c.deg_b = degrees_into(h, p.b);
    const Exact full = exact(binom(p.b.size(), h.k() - 1));
    c.a_prime_min = ceil_nonneg((Exact(1) - params.eps1) * full);
    c.b_prime_max = floor_nonneg(params.eps1 * full);
    for (Vertex v = 0; v < h.n(); ++v) {
        const std::uint64_t d = c.deg_b[static_cast<std::size_t>(v)];
        if (d >= c.a_prime_min)
            c.a_prime.insert(v);
        else if (d <= c.b_prime_max)
            c.b_prime.insert(v);
        else
            c.v0.insert(v);
    }
    c.q = (c.a & c.b_prime).size();
    return c;
}

/// deg(L, B) > beta C(|B|, k - |L|).
inline bool is_bad_set(const Hypergraph & h, VertexSet l, const Exact & beta, VertexSet b)
{
    if (l.size() >= h.k())
        throw InvalidQuery("bad-set test needs |L| < k");
    const std::uint64_t deg = l.empty() ? induced_edge_count(h, b) : degree_within(h, l, b);
    return exact(deg) > beta * exact(binom(b.size(), h.k() - l.size()));
}

/// One tested suffix of a linkable tuple.
struct SuffixWitness {
    int index = 0; // i in [s-1]
    VertexSet set;
    std::uint64_t degree = 0;
    std::uint64_t bound = 0; // floor(eps1 C(|B|, k - |set|))
};

struct LinkableEnd {
    std::vector<Vertex> tuple;
    std::vector<SuffixWitness> witness;
};

inline nlohmann::json to_json(const LinkableEnd & l)
{
    nlohmann::json w = nlohmann::json::array();
    for (const auto & x : l.witness)
        w.push_back({{"i", x.index}, {"set", x.set.members()}, {"degree", x.degree}, {"bound", x.bound}});
    return {{"tuple", l.tuple}, {"witness", w}};
}

struct LinkableCheck {
    std::optional<LinkableEnd> end;
    int failing_index = 0; // first i whose suffix is bad; 0 when linkable

    explicit operator bool() const { return end.has_value(); }
    const LinkableEnd & operator*() const { return *end; }
    const LinkableEnd * operator->() const { return &*end; }
};

/// Degree lookups into a fixed B with the bad-set thresholds precomputed.
class GoodnessOracle {
public:
    GoodnessOracle(const Hypergraph & h, VertexSet b, const GoodnessParams & params) : h_(&h), b_(b), params_(params)
    {
        if (h.k() != params.k)
            throw InvalidArgument("parameters are for a different uniformity");
        by_size_.resize(static_cast<std::size_t>(h.k()));
        eb_ = induced_edge_count(h, b);
    }

    [[nodiscard]] VertexSet b() const { return b_; }
    [[nodiscard]] const GoodnessParams & params() const { return params_; }
    [[nodiscard]] const Hypergraph & graph() const { return *h_; }

    /// deg(L, B).
    std::uint64_t degree(VertexSet l) const
    {
        if (l.empty())
            return eb_;
        if (l.size() >= h_->k())
            throw InvalidQuery("degree into B needs |L| < k");
        if (! l.subset_of(b_))
            return degree_within(*h_, l, b_);
        auto & cache = by_size_[static_cast<std::size_t>(l.size())];
        if (! cache)
            cache = subset_degrees_within(*h_, b_, l.size());
        const auto it = cache->find(l);
        return it == cache->end() ? 0 : it->second;
    }

    /// floor(beta C(|B|, k - r)).
    std::uint64_t bad_bound(int r, const Exact & beta) const
    {
        const auto key = std::make_pair(r, beta.str());
        if (auto it = bounds_.find(key); it != bounds_.end())
            return it->second;
        const std::uint64_t v = floor_nonneg(beta * exact(binom(b_.size(), h_->k() - r)));
        bounds_.emplace(key, v);
        return v;
    }

    bool bad(VertexSet l, const Exact & beta) const { return degree(l) > bad_bound(l.size(), beta); }
    bool bad(VertexSet l) const { return bad(l, params_.eps1); }

    /// True when some non-empty subset of K of size < k is beta-bad.
    bool has_bad_subset(VertexSet k_set, const Exact & beta) const
    {
        const int top = std::min(k_set.size(), h_->k() - 1);
        for (int r = 1; r <= top; ++r) {
            bool found = false;
            for_each_combination(k_set, r, [&](VertexSet sub) {
                if (bad(sub, beta)) {
                    found = true;
                    return false;
                }
                return true;
            });
            if (found)
                return true;
        }
        return false;
    }
    bool has_bad_subset(VertexSet k_set) const { return has_bad_subset(k_set, params_.eps1); }

    /// Suffixes (v_{(i-1)(k-ell)+1}, ..., v_ell) for i in [s-1] must be eps1-good.
    LinkableCheck linkable(const std::vector<Vertex> & tuple) const
    {
        const int ell = params_.ell;
        if (static_cast<int>(tuple.size()) != ell || VertexSet::from(tuple).size() != ell)
            throw InvalidArgument("linkable test needs an ell-tuple of distinct vertices");
        LinkableEnd end{tuple, {}};
        for (int i = 1; i <= params_.s - 1; ++i) {
            const int from = (i - 1) * params_.step();
            const VertexSet suffix = VertexSet::from(std::span<const Vertex>(tuple.data() + from, tuple.size() - static_cast<std::size_t>(from)));
            const std::uint64_t deg = degree(suffix);
            const std::uint64_t bound = bad_bound(suffix.size(), params_.eps1);
            if (deg > bound)
                return {std::nullopt, i};
            end.witness.push_back({i, suffix, deg, bound});
        }
        return {std::move(end), 0};
    }

private:
    const Hypergraph * h_;
    VertexSet b_;
    GoodnessParams params_;
    std::uint64_t eb_ = 0;
    mutable std::vector<std::optional<std::unordered_map<VertexSet, std::uint64_t, VertexSetHash>>> by_size_;
    mutable std::map<std::pair<int, std::string>, std::uint64_t> bounds_;
};

inline LinkableCheck is_linkable(const Hypergraph & h, const std::vector<Vertex> & tuple, const GoodnessParams & params, VertexSet b)
{
    return GoodnessOracle(h, b, params).linkable(tuple);
}

/// Link tuples of a path: the reversed ends. A tuple T is joined to the
/// rest of a cycle by placing T in order at the start of the next segment.
inline std::vector<Vertex> first_link_tuple(const OrderedPath & p) { return reverse_end(ends(p).first); }
inline std::vector<Vertex> last_link_tuple(const OrderedPath & p) { return reverse_end(ends(p).second); }

// ---------------------------------------------------------------------------
// Template filling: sampling first, then exhaustive search

namespace detail {

    struct Slot {
        Vertex fixed = -1;
        int pool = -1;
    };

    struct TemplateSpec {
        int k = 0;
        int ell = 0;
        std::vector<Slot> slots;
        std::vector<VertexSet> pools;
        std::function<bool(const std::vector<Vertex> &)> accept;
    };

    struct TemplateResult {
        SearchVerdict verdict = SearchVerdict::exhausted_no;
        std::vector<Vertex> sequence;
        bool sampled = false;
        int samples = 0;
        std::uint64_t nodes = 0;
    };

    /// Assigns distinct vertices to the slots so that every window of the
    /// ell-path is an edge and `accept` holds. Tries `samples` uniform random
    /// fillings, then a lexicographic depth-first search under the budget.
    inline TemplateResult fill_template(const Hypergraph & h, const TemplateSpec & t, std::uint64_t seed, int samples,
                                        const SearchBudget & budget)
    {
        budget.validate();
        TemplateResult res;
        const int len = static_cast<int>(t.slots.size());
        const int k = t.k;
        const int step = t.k - t.ell;
        VertexSet fixed;
        for (const Slot & s : t.slots)
            if (s.fixed >= 0) {
                if (fixed.contains(s.fixed))
                    return res;
                fixed.insert(s.fixed);
            }
        std::vector<VertexSet> pools = t.pools;
        for (auto & p : pools)
            p = p - fixed;
        std::vector<int> need(pools.size(), 0);
        for (const Slot & s : t.slots)
            if (s.fixed < 0)
                ++need[static_cast<std::size_t>(s.pool)];
        for (std::size_t i = 0; i < pools.size(); ++i)
            if (need[i] > pools[i].size())
                return res;
        for (std::size_t i = 0; i < pools.size(); ++i)
            for (std::size_t j = i + 1; j < pools.size(); ++j)
                if (! pools[i].disjoint_from(pools[j]))
                    throw InvalidArgument("template pools must be disjoint");
        std::vector<int> window_at(static_cast<std::size_t>(len), -1);
        for (int j = 0; j * step + k <= len; ++j)
            window_at[static_cast<std::size_t>(j * step + k - 1)] = j;
        auto window = [&](const std::vector<Vertex> & seq, int end) {
            VertexSet e;
            for (int p = end - k + 1; p <= end; ++p)
                e.insert(seq[static_cast<std::size_t>(p)]);
            return e;
        };
        auto complete_ok = [&](const std::vector<Vertex> & seq) {
            for (int p = 0; p < len; ++p)
                if (window_at[static_cast<std::size_t>(p)] >= 0 && ! h.has_edge(window(seq, p)))
                    return false;
            return ! t.accept || t.accept(seq);
        };

        std::mt19937_64 rng(seed);
        std::vector<std::vector<Vertex>> members(pools.size());
        for (std::size_t i = 0; i < pools.size(); ++i)
            members[i] = pools[i].members();
        std::vector<Vertex> seq(static_cast<std::size_t>(len));
        for (int attempt = 0; attempt < samples; ++attempt) {
            ++res.samples;
            for (auto & m : members)
                std::shuffle(m.begin(), m.end(), rng);
            std::vector<std::size_t> cursor(pools.size(), 0);
            for (int p = 0; p < len; ++p) {
                const Slot & s = t.slots[static_cast<std::size_t>(p)];
                seq[static_cast<std::size_t>(p)] =
                    s.fixed >= 0 ? s.fixed : members[static_cast<std::size_t>(s.pool)][cursor[static_cast<std::size_t>(s.pool)]++];
            }
            if (complete_ok(seq)) {
                res.verdict = SearchVerdict::found;
                res.sequence = seq;
                res.sampled = true;
                return res;
            }
        }

        const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
        const auto t0 = Clock::now();
        bool capped = false;
        VertexSet used = fixed;
        std::function<bool(int)> dfs = [&](int p) -> bool {
            if (p == len)
                return ! t.accept || t.accept(seq);
            const Slot & s = t.slots[static_cast<std::size_t>(p)];
            auto place = [&](Vertex v) -> bool {
                if (++res.nodes > cap || (budget.time_limit && (res.nodes & 1023U) == 0 && seconds_since(t0) > *budget.time_limit)) {
                    capped = true;
                    return false;
                }
                seq[static_cast<std::size_t>(p)] = v;
                if (window_at[static_cast<std::size_t>(p)] >= 0 && ! h.has_edge(window(seq, p)))
                    return false;
                return dfs(p + 1);
            };
            if (s.fixed >= 0)
                return place(s.fixed);
            const VertexSet options = pools[static_cast<std::size_t>(s.pool)] - used;
            for (Vertex v : options.members()) {
                used.insert(v);
                const bool ok = place(v);
                used.erase(v);
                if (ok)
                    return true;
                if (capped)
                    return false;
            }
            return false;
        };
        if (dfs(0)) {
            res.verdict = SearchVerdict::found;
            res.sequence = seq;
        }
        else
            res.verdict = capped ? SearchVerdict::budget_exceeded : SearchVerdict::exhausted_no;
        return res;
    }

} // namespace detail

/// Knobs shared by the sampling-then-exhaustive steps.
struct StepOptions {
    std::uint64_t seed = 0;
    int samples = 64;
    SearchBudget budget{std::uint64_t{2'000'000}, std::nullopt};
    /// Throw when |U| exceeds n/(2s(k-ell)); otherwise only report it.
    bool enforce_avoid_bound = true;
};

struct StepResult {
    SearchVerdict verdict = SearchVerdict::exhausted_no;
    std::optional<OrderedPath> path;
    bool sampled = false;
    int samples = 0;
    std::uint64_t nodes = 0;
    bool avoid_bound_ok = true;
};

inline nlohmann::json to_json(const StepResult & r)
{
    nlohmann::json j = {{"verdict", to_string(r.verdict)},
                        {"sampled", r.sampled},
                        {"samples", r.samples},
                        {"nodes", r.nodes},
                        {"avoid_bound_ok", r.avoid_bound_ok}};
    j["path"] = r.path ? to_json(*r.path) : nlohmann::json(nullptr);
    return j;
}

namespace detail {

    inline bool avoid_bound_ok(int n, int u, const GoodnessParams & p)
    {
        return Exact(u) <= Exact(n) / Exact(2 * p.s * p.step());
    }

    inline void check_tuple(const std::vector<Vertex> & t, int ell, VertexSet within, const char * what)
    {
        const VertexSet set = VertexSet::from(t);
        if (static_cast<int>(t.size()) != ell || set.size() != ell)
            throw InvalidArgument(std::string(what) + " must be an ell-tuple of distinct vertices");
        if (! set.subset_of(within))
            throw InvalidArgument(std::string(what) + " must lie in B'");
    }

    inline StepResult finish_step(const Hypergraph & h, const TemplateResult & t, int k, int ell, bool bound_ok)
    {
        StepResult r;
        r.verdict = t.verdict;
        r.sampled = t.sampled;
        r.samples = t.samples;
        r.nodes = t.nodes;
        r.avoid_bound_ok = bound_ok;
        if (t.verdict == SearchVerdict::found) {
            r.path = OrderedPath{k, ell, t.sequence};
            if (! check_ell_path(h, *r.path))
                throw std::logic_error("template search produced an invalid path");
        }
        return r;
    }

} // namespace detail

/// Length-2s ell-path that starts with L1 in order and ends with reversed L0:
/// x in A' \ U at position k, y in A' \ U at position (2s-1)(k-ell)+1 and all
/// other vertices from B' \ U. Its link tuples are L0 and L1 again, reversed.
inline StepResult connect_ends(const Hypergraph & h, const Classification & cls, const GoodnessParams & params,
                               const LinkableEnd & l0, const LinkableEnd & l1, VertexSet avoid, const StepOptions & opt = {})
{
    const int k = params.k;
    const int ell = params.ell;
    const int s = params.s;
    const int step = params.step();
    detail::check_tuple(l0.tuple, ell, cls.b_prime, "L0");
    detail::check_tuple(l1.tuple, ell, cls.b_prime, "L1");
    if (! VertexSet::from(l0.tuple).disjoint_from(VertexSet::from(l1.tuple)))
        throw InvalidArgument("L0 and L1 must be disjoint");
    const bool bound_ok = detail::avoid_bound_ok(h.n(), avoid.size(), params);
    if (! bound_ok && opt.enforce_avoid_bound)
        throw InvalidArgument("|U| exceeds n/(2s(k-ell))");
    const int len = ell + 2 * s * step;
    detail::TemplateSpec t{k, ell, std::vector<detail::Slot>(static_cast<std::size_t>(len)), {cls.a_prime - avoid, cls.b_prime - avoid}, {}};
    for (int p = 1; p <= len; ++p) {
        auto & slot = t.slots[static_cast<std::size_t>(p - 1)];
        if (p <= ell)
            slot.fixed = l1.tuple[static_cast<std::size_t>(p - 1)];
        else if (p > len - ell)
            slot.fixed = l0.tuple[static_cast<std::size_t>(len - p)];
        else if (p == k || p == (2 * s - 1) * step + 1)
            slot.pool = 0;
        else
            slot.pool = 1;
    }
    return detail::finish_step(h, detail::fill_template(h, t, opt.seed, opt.samples, opt.budget), k, ell, bound_ok);
}

/// Length-(s-1) ell-path starting with L in order, then one vertex of A' \ U
/// and (s-1)(k-ell)-1 vertices of B' \ U, whose last ell vertices form a
/// linkable tuple.
inline StepResult extend_end(const Hypergraph & h, const Classification & cls, const GoodnessOracle & oracle,
                             const LinkableEnd & l, VertexSet avoid, const StepOptions & opt = {})
{
    const auto & params = oracle.params();
    const int k = params.k;
    const int ell = params.ell;
    const int step = params.step();
    detail::check_tuple(l.tuple, ell, cls.b_prime, "L");
    const bool bound_ok = detail::avoid_bound_ok(h.n(), avoid.size(), params);
    if (! bound_ok && opt.enforce_avoid_bound)
        throw InvalidArgument("|U| exceeds n/(2s(k-ell))");
    const int len = ell + (params.s - 1) * step;
    detail::TemplateSpec t{k, ell, std::vector<detail::Slot>(static_cast<std::size_t>(len)), {cls.a_prime - avoid, cls.b_prime - avoid}, {}};
    for (int p = 1; p <= len; ++p) {
        auto & slot = t.slots[static_cast<std::size_t>(p - 1)];
        if (p <= ell)
            slot.fixed = l.tuple[static_cast<std::size_t>(p - 1)];
        else
            slot.pool = p == ell + 1 ? 0 : 1;
    }
    t.accept = [&](const std::vector<Vertex> & seq) {
        return static_cast<bool>(oracle.linkable(std::vector<Vertex>(seq.end() - ell, seq.end())));
    };
    return detail::finish_step(h, detail::fill_template(h, t, opt.seed, opt.samples, opt.budget), k, ell, bound_ok);
}

/// Length-s ell-path whose s edges all contain one vertex of A' (at position
/// k), all other vertices in B' \ U, with both link tuples linkable.
inline StepResult star_path(const Hypergraph & h, const Classification & cls, const GoodnessOracle & oracle, VertexSet avoid,
                            const StepOptions & opt = {})
{
    const auto & params = oracle.params();
    const int k = params.k;
    const int ell = params.ell;
    const int len = ell + params.s * params.step();
    detail::TemplateSpec t{k, ell, std::vector<detail::Slot>(static_cast<std::size_t>(len)), {cls.a_prime - avoid, cls.b_prime - avoid}, {}};
    for (int p = 1; p <= len; ++p)
        t.slots[static_cast<std::size_t>(p - 1)].pool = p == k ? 0 : 1;
    t.accept = [&](const std::vector<Vertex> & seq) {
        std::vector<Vertex> first(seq.begin(), seq.begin() + ell);
        std::reverse(first.begin(), first.end());
        return oracle.linkable(first) && oracle.linkable(std::vector<Vertex>(seq.end() - ell, seq.end()));
    };
    return detail::finish_step(h, detail::fill_template(h, t, opt.seed, opt.samples, opt.budget), k, ell, true);
}

// ---------------------------------------------------------------------------
// Stage failures

/// Raised by a pipeline step that could not produce its object.
class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, SearchVerdict verdict, nlohmann::json detail)
        : std::runtime_error(stage + ": " + to_string(verdict)), stage_(std::move(stage)), verdict_(verdict), detail_(std::move(detail))
    {
    }
    [[nodiscard]] const std::string & stage() const { return stage_; }
    [[nodiscard]] SearchVerdict verdict() const { return verdict_; }
    [[nodiscard]] const nlohmann::json & detail() const { return detail_; }

private:
    std::string stage_;
    SearchVerdict verdict_;
    nlohmann::json detail_;
};

/// Concatenates two paths that share ell vertices: tail's first ell
/// vertices must equal head's last ell vertices.
inline OrderedPath glue(const OrderedPath & head, const OrderedPath & tail)
{
    const auto ell = static_cast<std::size_t>(head.ell);
    if (head.k != tail.k || head.ell != tail.ell || head.vertices.size() < ell || tail.vertices.size() < ell ||
        ! std::equal(tail.vertices.begin(), tail.vertices.begin() + static_cast<std::ptrdiff_t>(ell), head.vertices.end() - static_cast<std::ptrdiff_t>(ell)))
        throw InvalidArgument("paths do not overlap in an ell-end");
    OrderedPath out = head;
    out.vertices.insert(out.vertices.end(), tail.vertices.begin() + static_cast<std::ptrdiff_t>(ell), tail.vertices.end());
    return out;
}

// ---------------------------------------------------------------------------
// Disjoint linkable paths in B'

struct DisjointPaths {
    std::vector<OrderedPath> paths;
    std::vector<std::optional<Vertex>> centres; // star route: the vertex all bad subsets contain
    std::string route;
    int s_star = 0;
    std::uint64_t nodes = 0;
};

inline nlohmann::json to_json(const DisjointPaths & d)
{
    nlohmann::json paths = nlohmann::json::array();
    for (const auto & p : d.paths)
        paths.push_back(to_json(p));
    nlohmann::json centres = nlohmann::json::array();
    for (const auto & c : d.centres)
        centres.push_back(c ? nlohmann::json(*c) : nlohmann::json(nullptr));
    return {{"route", d.route}, {"s_star", d.s_star}, {"paths", paths}, {"centres", centres}, {"nodes", d.nodes}};
}

namespace detail {

    /// Every path valid, inside B', pairwise disjoint, with two linkable ends.
    inline void verify_disjoint_paths(const Hypergraph & h, const GoodnessOracle & oracle, const Classification & cls,
                                      const DisjointPaths & d)
    {
        VertexSet seen;
        for (std::size_t i = 0; i < d.paths.size(); ++i) {
            const auto & p = d.paths[i];
            const VertexSet vs = p.vertex_set();
            if (! check_ell_path(h, p) || ! vs.subset_of(cls.b_prime) || ! vs.disjoint_from(seen))
                throw std::logic_error("disjoint path " + std::to_string(i) + " failed its checks");
            if (! oracle.linkable(first_link_tuple(p)) || ! oracle.linkable(last_link_tuple(p)))
                throw StageFailure("disjoint-paths/ends", SearchVerdict::exhausted_no, {{"path_index", i}});
            seen |= vs;
        }
    }

    /// Appends up to `rounds` blocks of k-ell vertices from `pool` after the
    /// last end until the last link tuple is linkable; fewest rounds first.
    inline std::optional<OrderedPath> extend_until_linkable(const Hypergraph & h, const GoodnessOracle & oracle, OrderedPath p,
                                                            VertexSet pool, int rounds, std::uint64_t cap, std::uint64_t & nodes)
    {
        const int k = p.k;
        const int ell = p.ell;
        const int step = k - ell;
        auto linkable_now = [&](const std::vector<Vertex> & seq) {
            return static_cast<bool>(oracle.linkable(std::vector<Vertex>(seq.end() - ell, seq.end())));
        };
        if (linkable_now(p.vertices))
            return p;
        for (int depth = 1; depth <= rounds; ++depth) {
            std::vector<Vertex> seq = p.vertices;
            VertexSet used = VertexSet::from(seq);
            const std::size_t target = seq.size() + static_cast<std::size_t>(depth * step);
            bool capped = false;
            std::function<bool()> dfs = [&]() -> bool {
                if (seq.size() == target)
                    return linkable_now(seq);
                for (Vertex v : (pool - used).members()) {
                    if (++nodes > cap) {
                        capped = true;
                        return false;
                    }
                    seq.push_back(v);
                    used.insert(v);
                    bool ok = true;
                    if ((seq.size() - static_cast<std::size_t>(ell)) % static_cast<std::size_t>(step) == 0) {
                        VertexSet e;
                        for (std::size_t i = seq.size() - static_cast<std::size_t>(k); i < seq.size(); ++i)
                            e.insert(seq[i]);
                        ok = h.has_edge(e);
                    }
                    if (ok && dfs())
                        return true;
                    seq.pop_back();
                    used.erase(v);
                    if (capped)
                        return false;
                }
                return false;
            };
            if (dfs()) {
                p.vertices = seq;
                return p;
            }
            if (capped)
                return std::nullopt;
        }
        return std::nullopt;
    }

} // namespace detail

/// Route for k/2 < ell < 3k/4: a matching of sq edges in B', each with a vertex
/// u whose removal leaves no (eps1^2/3)-bad subset, each edge ordered with u at
/// position ceil(k/2) and extended by up to three rounds per side.
inline DisjointPaths disjoint_paths_matching(const Hypergraph & h, const Classification & cls, const GoodnessOracle & oracle, int q,
                                       const SearchBudget & budget = {std::uint64_t{2'000'000}, std::nullopt})
{
    const auto & params = oracle.params();
    DisjointPaths out;
    out.route = "matching-extension";
    out.s_star = 7;
    if (q < 0)
        throw InvalidArgument("q must be non-negative");
    if (q == 0)
        return out;
    const int k = params.k;
    const Exact beta = params.eps1 * params.eps1 / Exact(3);
    auto centre_of = [&](VertexSet e) -> std::optional<Vertex> {
        for (Vertex u : e.members())
            if (! oracle.has_bad_subset(e.without(u), beta))
                return u;
        return std::nullopt;
    };
    const int count = params.s * q;
    const auto matching = find_matching_avoiding(h, count, h.vertices() - cls.b_prime,
                                                 [&](VertexSet e) { return centre_of(e).has_value(); }, budget);
    if (! matching)
        throw StageFailure("disjoint-paths/matching", SearchVerdict::exhausted_no, {{"needed", count}});
    const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
    VertexSet used;
    for (VertexSet e : *matching)
        used |= e;
    const VertexSet pool_all = cls.b_prime & cls.b;
    for (std::size_t i = 0; i < matching->size(); ++i) {
        const VertexSet e = (*matching)[i];
        const Vertex u = *centre_of(e);
        std::vector<Vertex> order = e.without(u).members();
        order.insert(order.begin() + ((k + 1) / 2 - 1), u);
        OrderedPath p{k, params.ell, order};
        for (int side = 0; side < 2; ++side) {
            const auto ext = detail::extend_until_linkable(h, oracle, p, pool_all - used, 3, cap, out.nodes);
            if (! ext)
                throw StageFailure("disjoint-paths/extension", SearchVerdict::exhausted_no,
                                   {{"path_index", i}, {"side", side == 0 ? "last" : "first"}});
            used |= ext->vertex_set();
            p = reversed(*ext);
        }
        out.paths.push_back(p);
        out.centres.emplace_back(u);
    }
    detail::verify_disjoint_paths(h, oracle, cls, out);
    return out;
}

/// Route for k/2 < ell < k with k^2/2 slack: either an edge e with e \ {u}
/// and e \ {v} both free of eps1-bad subsets (ordered u ... v), or a tight
/// path in the link of a vertex u of largest star degree, cut so that u sits
/// in the middle block.
inline DisjointPaths disjoint_paths_star(const Hypergraph & h, const Classification & cls, const GoodnessOracle & oracle, int q,
                                            const SearchBudget & budget = {std::uint64_t{2'000'000}, std::nullopt})
{
    const auto & params = oracle.params();
    DisjointPaths out;
    out.route = "star";
    out.s_star = params.s;
    if (q < 0)
        throw InvalidArgument("q must be non-negative");
    if (q == 0)
        return out;
    const int k = params.k;
    const VertexSet b_set = cls.b;
    auto in_family = [&](VertexSet kset) { return kset.subset_of(b_set) && ! oracle.has_bad_subset(kset); };
    VertexSet used;
    for (int i = 0; i < params.s * q; ++i) {
        const VertexSet free = cls.b_prime - used;
        std::optional<OrderedPath> found;
        std::optional<Vertex> centre;
        std::vector<std::pair<std::int64_t, Vertex>> star_degree;
        std::unordered_map<Vertex, std::int64_t> deg;
        for (VertexSet e : h.edges()) {
            if (! e.subset_of(free))
                continue;
            std::vector<Vertex> owners;
            e.for_each([&](Vertex v) {
                if (in_family(e.without(v)))
                    owners.push_back(v);
            });
            if (owners.size() >= 2 && ! found) {
                std::vector<Vertex> order = e.without(owners[0]).without(owners[1]).members();
                order.insert(order.begin(), owners[0]);
                order.push_back(owners[1]);
                found = OrderedPath{k, params.ell, order};
            }
            for (Vertex v : owners)
                ++deg[v];
        }
        if (! found) {
            for (const auto & [v, d] : deg)
                star_degree.emplace_back(-d, v);
            std::sort(star_degree.begin(), star_degree.end());
            for (const auto & [negd, u] : star_degree) {
                const VertexSet forbidden = h.vertices() - (free & b_set).without(u);
                auto p = find_tight_path_in_link(h, u, forbidden.without(u), params.ell, in_family, budget);
                if (p) {
                    found = std::move(p);
                    centre = u;
                    break;
                }
            }
        }
        if (! found)
            throw StageFailure("disjoint-paths/star", SearchVerdict::exhausted_no, {{"path_index", i}});
        used |= found->vertex_set();
        out.paths.push_back(*found);
        out.centres.push_back(centre);
    }
    detail::verify_disjoint_paths(h, oracle, cls, out);
    return out;
}

// ---------------------------------------------------------------------------
// Cover path

struct CoverPath {
    OrderedPath path;
    VertexSet a1;
    VertexSet b1;
    int w = 0;
    int extensions = 0;
    int v0_paths = 0;
    int seed_paths = 0;
    int connections = 0;
    bool avoid_bound_ok = true;
    Exact size_bound; // (2 s s* + 6 s^2) k eps2 |B|
    bool size_bound_ok = true;
    bool balanced = false;
    std::uint64_t nodes = 0;
};

inline nlohmann::json to_json(const CoverPath & c)
{
    return {{"path", to_json(c.path)},
            {"A1", c.a1.members()},
            {"B1", c.b1.members()},
            {"w", c.w},
            {"extensions", c.extensions},
            {"v0_paths", c.v0_paths},
            {"seed_paths", c.seed_paths},
            {"connections", c.connections},
            {"avoid_bound_ok", c.avoid_bound_ok},
            {"size_bound", to_string(c.size_bound)},
            {"size_bound_ok", c.size_bound_ok},
            {"balanced", c.balanced},
            {"nodes", c.nodes}};
}

/// Builds the short path Q: covers V0 through tight paths in links, joins the
/// seed paths and the V0 paths with connect_ends, then applies
/// (w - ell)/(k - ell) extensions so that |B1| = (sk - s ell - 1)|A1| + ell.
inline CoverPath build_cover_path(const Hypergraph & h, const Classification & cls, const GoodnessOracle & oracle,
                                  const std::vector<OrderedPath> & seed_paths, int s_star, const StepOptions & opt = {})
{
    const auto & params = oracle.params();
    const int k = params.k;
    const int ell = params.ell;
    const int s = params.s;
    const int step = params.step();
    CoverPath out;
    out.seed_paths = static_cast<int>(seed_paths.size());
    std::vector<OrderedPath> pieces = seed_paths;
    VertexSet reserved = cls.v0;
    for (const auto & p : seed_paths)
        reserved |= p.vertex_set();
    std::uint64_t tag = 0;
    auto next_opt = [&]() {
        StepOptions o = opt;
        o.enforce_avoid_bound = false;
        o.seed = detail::mix_seed(opt.seed, tag++);
        return o;
    };
    auto note_bound = [&](VertexSet avoid) {
        if (! detail::avoid_bound_ok(h.n(), avoid.size(), params)) {
            if (opt.enforce_avoid_bound)
                throw InvalidArgument("|U| exceeds n/(2s(k-ell))");
            out.avoid_bound_ok = false;
        }
    };

    VertexSet v0_used;
    for (Vertex x : cls.v0.members()) {
        const VertexSet allowed = (cls.b & cls.b_prime) - reserved - v0_used;
        const auto p = find_tight_path_in_link(h, x, h.vertices() - allowed.with(x), ell,
                                               [&](VertexSet win) { return ! oracle.has_bad_subset(win); }, opt.budget);
        if (! p)
            throw StageFailure("cover-path/v0", SearchVerdict::exhausted_no, {{"vertex", x}});
        if (! oracle.linkable(first_link_tuple(*p)) || ! oracle.linkable(last_link_tuple(*p)))
            throw StageFailure("cover-path/v0-ends", SearchVerdict::exhausted_no, {{"vertex", x}});
        v0_used |= p->vertex_set();
        pieces.push_back(*p);
        ++out.v0_paths;
    }
    if (pieces.empty()) {
        const auto r = star_path(h, cls, oracle, VertexSet{}, next_opt());
        out.nodes += r.nodes;
        if (! r.path)
            throw StageFailure("cover-path/initial", r.verdict, to_json(r));
        pieces.push_back(*r.path);
    }

    VertexSet all = reserved | v0_used;
    for (const auto & p : pieces)
        all |= p.vertex_set();
    OrderedPath q = pieces.front();
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const auto l1 = oracle.linkable(last_link_tuple(q));
        const auto l0 = oracle.linkable(first_link_tuple(pieces[i]));
        if (! l0 || ! l1)
            throw StageFailure("cover-path/connect", SearchVerdict::exhausted_no, {{"piece", i}, {"reason", "end not linkable"}});
        note_bound(all);
        const auto r = connect_ends(h, cls, params, *l0, *l1, all, next_opt());
        out.nodes += r.nodes;
        if (! r.path)
            throw StageFailure("cover-path/connect", r.verdict, {{"piece", i}, {"search", to_json(r)}});
        all |= r.path->vertex_set();
        q = glue(glue(q, *r.path), pieces[i]);
        ++out.connections;
    }

    const VertexSet vq = q.vertex_set();
    out.w = (s * k - s * ell - 1) * (cls.a_prime - vq).size() - (cls.b_prime - vq).size();
    if (out.w < ell || (out.w - ell) % step != 0)
        throw StageFailure("cover-path/balance", SearchVerdict::exhausted_no, {{"w", out.w}});
    const int rounds = (out.w - ell) / step;
    for (int r = 0; r < rounds; ++r) {
        const auto l = oracle.linkable(last_link_tuple(q));
        if (! l)
            throw StageFailure("cover-path/extend", SearchVerdict::exhausted_no, {{"round", r}, {"reason", "end not linkable"}});
        const VertexSet avoid = q.vertex_set() - VertexSet::from(l->tuple);
        note_bound(avoid);
        const auto res = extend_end(h, cls, oracle, *l, avoid, next_opt());
        out.nodes += res.nodes;
        if (! res.path)
            throw StageFailure("cover-path/extend", res.verdict, {{"round", r}, {"search", to_json(res)}});
        q = glue(q, *res.path);
        ++out.extensions;
    }
    if (! check_ell_path(h, q))
        throw std::logic_error("cover path failed the checker");
    if (! oracle.linkable(first_link_tuple(q)) || ! oracle.linkable(last_link_tuple(q)))
        throw StageFailure("cover-path/ends", SearchVerdict::exhausted_no, {{"path", to_json(q)}});
    if (! cls.v0.subset_of(q.vertex_set()))
        throw std::logic_error("cover path misses a V0 vertex");
    out.path = q;
    const VertexSet vq2 = q.vertex_set();
    const auto ends_pair = ends(q);
    out.a1 = cls.a_prime - vq2;
    out.b1 = (cls.b_prime - vq2) | VertexSet::from(ends_pair.first) | VertexSet::from(ends_pair.second);
    out.balanced = out.b1.size() == (s * k - s * ell - 1) * out.a1.size() + ell;
    out.size_bound = Exact(2 * s * s_star + 6 * s * s) * Exact(k) * params.eps2 * Exact(cls.b.size());
    out.size_bound_ok = Exact(vq2.size()) <= out.size_bound;
    if (! out.balanced)
        throw StageFailure("cover-path/balance", SearchVerdict::exhausted_no, to_json(out));
    return out;
}

// ---------------------------------------------------------------------------
// Local lemma machinery

/// e p (d + 1) < 1, evaluated with 50 significant digits.
inline bool lll_condition(long double p, long double d)
{
    using F = boost::multiprecision::cpp_bin_float_50;
    if (! (p >= 0 && p <= 1) || ! (d >= 0))
        throw InvalidArgument("lll_condition needs p in [0, 1] and d >= 0");
    return boost::multiprecision::exp(F(1)) * F(p) * (F(d) + 1) < 1;
}

inline bool lll_condition(const Exact & p, const Exact & d)
{
    using F = boost::multiprecision::cpp_bin_float_50;
    if (p < 0 || p > 1 || d < 0)
        throw InvalidArgument("lll_condition needs p in [0, 1] and d >= 0");
    const F pf = F(boost::multiprecision::numerator(p)) / F(boost::multiprecision::denominator(p));
    const F df = F(boost::multiprecision::numerator(d)) / F(boost::multiprecision::denominator(d));
    return boost::multiprecision::exp(F(1)) * pf * (df + 1) < 1;
}

/// Canonical event of a random injection: domain[i] is sent to image[i].
struct InjectionEvent {
    std::vector<int> domain;
    std::vector<Vertex> image;

    void validate() const
    {
        if (domain.size() != image.size())
            throw InvalidArgument("injection event needs equally many domain and image points");
        std::vector<int> d = domain;
        std::vector<Vertex> r = image;
        std::sort(d.begin(), d.end());
        std::sort(r.begin(), r.end());
        if (std::adjacent_find(d.begin(), d.end()) != d.end() || std::adjacent_find(r.begin(), r.end()) != r.end())
            throw InvalidArgument("injection event is not a bijection");
    }
};

/// Some shared domain point has different images, or some shared image
/// point has different preimages.
inline bool conflicts(const InjectionEvent & a, const InjectionEvent & b)
{
    for (std::size_t i = 0; i < a.domain.size(); ++i)
        for (std::size_t j = 0; j < b.domain.size(); ++j) {
            if (a.domain[i] == b.domain[j] && a.image[i] != b.image[j])
                return true;
            if (a.image[i] == b.image[j] && a.domain[i] != b.domain[j])
                return true;
        }
    return false;
}

/// Conflict graph built one event at a time; only events sharing a domain or
/// image point are compared.
class ConflictGraph {
public:
    int add(InjectionEvent e)
    {
        e.validate();
        const int id = static_cast<int>(events_.size());
        std::vector<int> candidates;
        for (int d : e.domain)
            for (int o : by_domain_[d])
                candidates.push_back(o);
        for (Vertex v : e.image)
            for (int o : by_image_[v])
                candidates.push_back(o);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        degree_.push_back(0);
        for (int o : candidates)
            if (conflicts(e, events_[static_cast<std::size_t>(o)])) {
                ++degree_[static_cast<std::size_t>(o)];
                ++degree_.back();
            }
        for (int d : e.domain)
            by_domain_[d].push_back(id);
        for (Vertex v : e.image)
            by_image_[v].push_back(id);
        events_.push_back(std::move(e));
        return id;
    }

    [[nodiscard]] const std::vector<int> & degrees() const { return degree_; }
    [[nodiscard]] int max_degree() const { return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end()); }
    [[nodiscard]] std::size_t size() const { return events_.size(); }

private:
    std::vector<InjectionEvent> events_;
    std::vector<int> degree_;
    std::unordered_map<int, std::vector<int>> by_domain_;
    std::unordered_map<Vertex, std::vector<int>> by_image_;
};

// ---------------------------------------------------------------------------
// Completion through the partition X u Y

struct CompletionCertificate {
    Exact rho;
    Exact p0; // (1 + 8 s^3 rho) / (|X| C(|Y|,k-1) (k-1)!)
    Exact d;  // (s + 4) k! rho |X| C(|Y|,k-1)
    bool lll = false;
    Exact rho_vertices;  // smallest rho meeting hypothesis (2)
    Exact rho_ends;      // smallest rho meeting hypothesis (3)
    bool hypothesis2 = false;
    bool hypothesis3 = false;
    Vertex x_first = -1;
    Vertex x_last = -1;
    bool screening_ok = false;
};

inline nlohmann::json to_json(const CompletionCertificate & c)
{
    return {{"rho", to_string(c.rho)},
            {"p0", to_string(c.p0)},
            {"d", to_string(c.d)},
            {"lll_condition", c.lll},
            {"rho_vertices", to_string(c.rho_vertices)},
            {"rho_ends", to_string(c.rho_ends)},
            {"hypothesis2", c.hypothesis2},
            {"hypothesis3", c.hypothesis3},
            {"x_first", c.x_first},
            {"x_last", c.x_last},
            {"screening_ok", c.screening_ok}};
}

struct CompletionOptions {
    std::uint64_t seed = 0;
    int samples = 256;
    SearchBudget budget{std::uint64_t{5'000'000}, std::nullopt};
};

struct CompletionResult {
    SearchVerdict verdict = SearchVerdict::exhausted_no;
    std::optional<OrderedPath> path;
    CompletionCertificate certificate;
    bool sampled = false;
    int samples = 0;
    std::uint64_t nodes = 0;
};

inline nlohmann::json to_json(const CompletionResult & r)
{
    nlohmann::json j = {{"verdict", to_string(r.verdict)},
                        {"certificate", to_json(r.certificate)},
                        {"sampled", r.sampled},
                        {"samples", r.samples},
                        {"nodes", r.nodes}};
    j["path"] = r.path ? to_json(*r.path) : nlohmann::json(nullptr);
    return j;
}

/// Hamilton ell-path on X u Y that starts with L1 in order and ends with
/// reversed L0. X vertices sit at positions (i-1)(sk - s ell) + k; the first
/// and last of them are screened by their non-degree with the end sets.
inline CompletionResult complete_hamilton_path(const Hypergraph & h, VertexSet x, VertexSet y, const std::vector<Vertex> & l0,
                                               const std::vector<Vertex> & l1, const Exact & rho, const CompletionOptions & opt = {})
{
    const int k = h.k();
    const int ell = static_cast<int>(l1.size());
    if (ell < 1 || ell >= k || static_cast<int>(l0.size()) != ell)
        throw InvalidArgument("ends must be ell-tuples with 1 <= ell < k");
    const int s = ell_cycle_s(k, ell);
    const int step = k - ell;
    const int t = x.size();
    const VertexSet e0 = VertexSet::from(l0);
    const VertexSet e1 = VertexSet::from(l1);
    if (! x.disjoint_from(y))
        throw InvalidArgument("X and Y must be disjoint");
    if (e0.size() != ell || e1.size() != ell || ! e0.disjoint_from(e1) || ! (e0 | e1).subset_of(y))
        throw InvalidArgument("ends must be disjoint ell-sets inside Y");
    if (t < 1 || y.size() != (s * k - s * ell - 1) * t + ell)
        throw InvalidArgument("hypothesis |Y| = (sk - s ell - 1)|X| + ell fails");

    CompletionResult res;
    auto & cert = res.certificate;
    cert.rho = rho;
    const std::uint64_t cy = binom(y.size(), k - 1);
    cert.p0 = (Exact(1) + Exact(8 * s * s * s) * rho) / (Exact(t) * exact(cy) * exact(factorial(k - 1)));
    cert.d = Exact(s + 4) * exact(factorial(k)) * rho * Exact(t) * exact(cy);
    cert.lll = cert.p0 <= 1 && lll_condition(cert.p0, cert.d);

    // Hypothesis (2) and (3): non-degrees normalised by their binomials.
    const DegreePattern xy = {{x, 1}, {y, k - 1}};
    std::vector<std::uint64_t> deg_into(static_cast<std::size_t>(h.n()), 0);
    for (VertexSet e : h.edges())
        if ((e & x).size() == 1 && (e & y).size() == k - 1)
            e.for_each([&](Vertex v) { ++deg_into[static_cast<std::size_t>(v)]; });
    Exact worst_vertex = 0;
    x.for_each([&](Vertex v) {
        worst_vertex = std::max(worst_vertex, Exact(exact(cy - deg_into[static_cast<std::size_t>(v)]) / exact(cy)));
    });
    const std::uint64_t per_y = static_cast<std::uint64_t>(t) * binom(y.size() - 1, k - 2);
    y.for_each([&](Vertex v) {
        worst_vertex = std::max(worst_vertex, Exact(exact(per_y - deg_into[static_cast<std::size_t>(v)]) / exact(cy)));
    });
    cert.rho_vertices = worst_vertex;
    cert.hypothesis2 = worst_vertex <= rho;
    auto end_sets = [&](const std::vector<Vertex> & tuple) {
        std::vector<VertexSet> sets{VertexSet{}};
        for (int i = 1; i <= s - 1; ++i) {
            const auto from = static_cast<std::size_t>((i - 1) * step);
            sets.push_back(VertexSet::from(std::span<const Vertex>(tuple.data() + from, tuple.size() - from)));
        }
        return sets;
    };
    const auto sets1 = end_sets(l1);
    const auto sets0 = end_sets(l0);
    Exact worst_end = 0;
    for (const auto * sets : {&sets0, &sets1})
        for (VertexSet l : *sets)
            worst_end = std::max(worst_end, Exact(exact(nondegree_into(h, l, xy)) / exact(binom(y.size(), k - l.size()))));
    cert.rho_ends = worst_end;
    cert.hypothesis3 = worst_end <= rho;

    // Screening of the first and last X vertex.
    std::mt19937_64 rng(opt.seed);
    auto passes = [&](Vertex v, const std::vector<VertexSet> & sets) {
        for (VertexSet l : sets) {
            const Exact bound = Exact(2 * s * s) * rho * exact(binom(y.size(), k - l.size() - 1));
            if (exact(nondegree_into(h, l.with(v), xy)) > bound)
                return false;
        }
        return true;
    };
    auto pick = [&](const std::vector<VertexSet> & sets, VertexSet from) {
        std::vector<Vertex> ok;
        from.for_each([&](Vertex v) {
            if (passes(v, sets))
                ok.push_back(v);
        });
        if (ok.empty())
            return std::make_pair(from.min(), false);
        return std::make_pair(ok[static_cast<std::size_t>(rng() % ok.size())], true);
    };
    const auto [first, first_ok] = pick(sets1, x);
    cert.x_first = first;
    bool last_ok = first_ok;
    if (t == 1)
        cert.x_last = first;
    else {
        const auto [last, ok] = pick(sets0, x.without(first));
        cert.x_last = last;
        last_ok = ok;
    }
    cert.screening_ok = first_ok && last_ok;

    const int len = ell + s * t * step;
    auto make_spec = [&](bool pin) {
        detail::TemplateSpec spec{k, ell, std::vector<detail::Slot>(static_cast<std::size_t>(len)), {}, {}};
        spec.pools = {pin ? x - VertexSet::of({cert.x_first, cert.x_last}) : x, y - e0 - e1};
        for (int p = 1; p <= len; ++p) {
            auto & slot = spec.slots[static_cast<std::size_t>(p - 1)];
            if (p <= ell)
                slot.fixed = l1[static_cast<std::size_t>(p - 1)];
            else if (p > len - ell)
                slot.fixed = l0[static_cast<std::size_t>(len - p)];
            else if (p >= k && (p - k) % (s * step) == 0) {
                const int i = (p - k) / (s * step);
                if (pin && i == 0)
                    slot.fixed = cert.x_first;
                else if (pin && i == t - 1)
                    slot.fixed = cert.x_last;
                else
                    slot.pool = 0;
            }
            else
                slot.pool = 1;
        }
        return spec;
    };
    auto sampled = detail::fill_template(h, make_spec(true), detail::mix_seed(opt.seed, 1), opt.samples, SearchBudget{1, std::nullopt});
    res.samples = sampled.samples;
    if (sampled.verdict == SearchVerdict::found && sampled.sampled) {
        res.verdict = SearchVerdict::found;
        res.sampled = true;
        res.path = OrderedPath{k, ell, sampled.sequence};
    }
    else {
        const auto full = detail::fill_template(h, make_spec(false), 0, 0, opt.budget);
        res.nodes = full.nodes;
        res.verdict = full.verdict;
        if (full.verdict == SearchVerdict::found)
            res.path = OrderedPath{k, ell, full.sequence};
    }
    if (res.path && (! check_ell_path(h, *res.path) || res.path->vertex_set() != (x | y)))
        throw std::logic_error("completion produced an invalid path");
    return res;
}

// ---------------------------------------------------------------------------
// Reports on the counting statements

struct CensusRow {
    std::string statement; // "bad-sets" or "clean-sets"
    Exact beta;
    int size = 0;
    std::uint64_t count = 0;
    Exact bound;
    bool pass = false;
};

struct CensusReport {
    bool sparse_b = false; // e(B) <= eps0 C(|B|, k)
    std::vector<CensusRow> rows;
    [[nodiscard]] bool all_pass() const
    {
        return std::all_of(rows.begin(), rows.end(), [](const CensusRow & r) { return r.pass; });
    }
};

inline nlohmann::json to_json(const CensusReport & c)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto & r : c.rows)
        rows.push_back({{"statement", r.statement},
                        {"beta", to_string(r.beta)},
                        {"size", r.size},
                        {"count", r.count},
                        {"bound", to_string(r.bound)},
                        {"pass", r.pass}});
    return {{"sparse_b", c.sparse_b}, {"rows", rows}, {"all_pass", c.all_pass()}};
}

/// Counts beta-bad sets of each size 1..k-1 inside B against (eps0/beta) C(|B|, size),
/// and d-sets of B without beta-bad subsets against (1 - 2^d eps0/beta) C(|B|, d).
inline CensusReport census(const Hypergraph & h, VertexSet b, const GoodnessParams & params, const std::vector<Exact> & betas)
{
    const GoodnessOracle oracle(h, b, params);
    CensusReport out;
    const int k = h.k();
    out.sparse_b = exact(induced_edge_count(h, b)) <= params.eps0 * exact(binom(b.size(), k));
    for (const Exact & beta : betas) {
        std::unordered_set<VertexSet, VertexSetHash> bad;
        if (oracle.bad(VertexSet{}, beta))
            bad.insert(VertexSet{});
        for (int r = 1; r < k && r <= b.size(); ++r) {
            std::uint64_t count = 0;
            for (const auto & [set, deg] : subset_degrees_within(h, b, r))
                if (deg > oracle.bad_bound(r, beta)) {
                    ++count;
                    bad.insert(set);
                }
            const Exact bound = params.eps0 / beta * exact(binom(b.size(), r));
            out.rows.push_back({"bad-sets", beta, r, count, bound, exact(count) <= bound});
        }
        for (int d = 1; d < k && d <= b.size(); ++d) {
            std::uint64_t clean = 0;
            for_each_combination(b, d, [&](VertexSet set) {
                bool dirty = bad.contains(VertexSet{});
                for (int r = 1; r <= d && ! dirty; ++r)
                    for_each_combination(set, r, [&](VertexSet sub) {
                        if (bad.contains(sub)) {
                            dirty = true;
                            return false;
                        }
                        return true;
                    });
                clean += ! dirty;
            });
            const Exact bound = (Exact(1) - exact_pow(Exact(2), d) * params.eps0 / beta) * exact(binom(b.size(), d));
            out.rows.push_back({"clean-sets", beta, d, clean, bound, exact(clean) >= bound});
        }
    }
    return out;
}

struct ImplicationReport {
    bool hypothesis = false;   // B exhaustively minimal and delta_{k-1} >= n/(s(k-ell))
    bool a_meets_b_prime = false;
    bool b_within_b_prime = false;
    bool b_meets_a_prime = false;
    bool a_within_a_prime = false;
    bool implications_hold = false;
    // |A \ A'|, |B \ B'|, |A' \ A|, |B' \ B| <= eps2 |B| and |V0| <= 2 eps2 |B|
    std::vector<int> differences;
    bool size_bounds_hold = false;
};

inline nlohmann::json to_json(const ImplicationReport & r)
{
    return {{"hypothesis", r.hypothesis},
            {"a_meets_b_prime", r.a_meets_b_prime},
            {"b_within_b_prime", r.b_within_b_prime},
            {"b_meets_a_prime", r.b_meets_a_prime},
            {"a_within_a_prime", r.a_within_a_prime},
            {"implications_hold", r.implications_hold},
            {"differences", r.differences},
            {"size_bounds_hold", r.size_bounds_hold}};
}

inline ImplicationReport classification_report(const Hypergraph & h, const ExtremalPartition & p, const Classification & c,
                                         const GoodnessParams & params)
{
    ImplicationReport r;
    r.hypothesis = p.mode == PartitionMode::exhaustive && exact(min_ell_degree(h, h.k() - 1)) >= params.threshold(h.n());
    r.a_meets_b_prime = ! (c.a & c.b_prime).empty();
    r.b_within_b_prime = c.b.subset_of(c.b_prime);
    r.b_meets_a_prime = ! (c.b & c.a_prime).empty();
    r.a_within_a_prime = c.a.subset_of(c.a_prime);
    r.implications_hold = (! r.a_meets_b_prime || r.b_within_b_prime) && (! r.b_meets_a_prime || r.a_within_a_prime);
    r.differences = {(c.a - c.a_prime).size(), (c.b - c.b_prime).size(), (c.a_prime - c.a).size(), (c.b_prime - c.b).size(),
                     c.v0.size()};
    const Exact cap = params.eps2 * Exact(c.b.size());
    r.size_bounds_hold = true;
    for (std::size_t i = 0; i < 4; ++i)
        r.size_bounds_hold = r.size_bounds_hold && Exact(r.differences[i]) <= cap;
    r.size_bounds_hold = r.size_bounds_hold && Exact(c.v0.size()) <= Exact(2) * cap;
    return r;
}

struct DegreeBoundReport {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    [[nodiscard]] bool holds() const { return violations == 0; }
};

inline nlohmann::json to_json(const DegreeBoundReport & r)
{
    return {{"checked", r.checked}, {"violations", r.violations}, {"holds", r.holds()}};
}

/// Every eps1-good ell'-set L' in B' (1 <= ell' <= ell) has
/// deg(L', A'(B')^{k-1}) >= (1 - 2sk eps1)|A'| C(|B'| - ell', k - 1 - ell').
inline DegreeBoundReport good_set_degree_report(const Hypergraph & h, const Classification & c, const GoodnessOracle & oracle)
{
    const auto & params = oracle.params();
    const int k = h.k();
    std::unordered_map<VertexSet, std::uint64_t, VertexSetHash> deg;
    for (VertexSet e : h.edges())
        if ((e & c.a_prime).size() == 1 && (e & c.b_prime).size() == k - 1)
            for (int r = 1; r <= params.ell; ++r)
                for_each_combination(e & c.b_prime, r, [&](VertexSet sub) { ++deg[sub]; });
    DegreeBoundReport out;
    const Exact factor = Exact(1) - Exact(2 * params.s * k) * params.eps1;
    for (int r = 1; r <= params.ell && r <= c.b_prime.size(); ++r) {
        const Exact bound = factor * Exact(c.a_prime.size()) * exact(binom(c.b_prime.size() - r, k - 1 - r));
        for_each_combination(c.b_prime, r, [&](VertexSet l) {
            if (oracle.bad(l))
                return;
            ++out.checked;
            const auto it = deg.find(l);
            if (exact(it == deg.end() ? 0 : it->second) < bound)
                ++out.violations;
        });
    }
    return out;
}

struct RemainderReport {
    bool b1_large = false;      // |B1| >= (1 - eps1)|B|
    bool a1_nondegree = false;  // nondeg(a, B1) < 3 eps1 C(|B1|, k-1)
    bool b1_nondegree = false;  // nondeg(b, A1 B1^{k-1}) <= 3k eps1 C(|B1|, k-1)
    bool ends_nondegree = false; // nondeg(L_j^i, A1 B1^{k-1}) <= (2s+1) k eps1 C(|B1|, k - ell_i)
};

inline nlohmann::json to_json(const RemainderReport & r)
{
    return {{"b1_large", r.b1_large}, {"a1_nondegree", r.a1_nondegree}, {"b1_nondegree", r.b1_nondegree}, {"ends_nondegree", r.ends_nondegree}};
}

inline RemainderReport remainder_report(const Hypergraph & h, const Classification & c, const CoverPath & q, const GoodnessParams & params)
{
    RemainderReport r;
    const int k = h.k();
    const VertexSet a1 = q.a1;
    const VertexSet b1 = q.b1;
    r.b1_large = Exact(b1.size()) >= (Exact(1) - params.eps1) * Exact(c.b.size());
    const Exact full = exact(binom(b1.size(), k - 1));
    r.a1_nondegree = true;
    a1.for_each([&](Vertex a) {
        const std::uint64_t deg = degree_within(h, VertexSet::of({a}), b1);
        if (! (exact(binom(b1.size(), k - 1) - deg) < Exact(3) * params.eps1 * full))
            r.a1_nondegree = false;
    });
    r.b1_nondegree = true;
    r.ends_nondegree = true;
    if (a1.empty())
        return r;
    const DegreePattern pat = {{a1, 1}, {b1, k - 1}};
    b1.for_each([&](Vertex b) {
        if (exact(nondegree_into(h, VertexSet::of({b}), pat)) > Exact(3 * k) * params.eps1 * full)
            r.b1_nondegree = false;
    });
    for (const auto & tuple : {first_link_tuple(q.path), last_link_tuple(q.path)})
        for (int i = 0; i <= params.s - 1; ++i) {
            VertexSet l;
            if (i > 0) {
                const auto from = static_cast<std::size_t>((i - 1) * params.step());
                l = VertexSet::from(std::span<const Vertex>(tuple.data() + from, tuple.size() - from));
            }
            const Exact bound = Exact((2 * params.s + 1) * k) * params.eps1 * exact(binom(b1.size(), k - l.size()));
            if (exact(nondegree_into(h, l, pat)) > bound)
                r.ends_nondegree = false;
        }
    return r;
}

// ---------------------------------------------------------------------------
// Pipeline

struct PipelineOptions {
    std::uint64_t seed = 0;
    MinimizeOptions partition;
    StepOptions steps;
    CompletionOptions completion;
    SearchBudget fallback_budget{std::uint64_t{50'000'000}, std::nullopt};
    bool require_extremal = true;
    bool reports = true;
};

struct StageRecord {
    std::string name;
    std::string status; // ok, failed, skipped
    nlohmann::json detail;
};

struct PipelineResult {
    std::optional<OrderedCycle> cycle;
    std::vector<StageRecord> stages;
    std::string failed_stage;
    SearchVerdict verdict = SearchVerdict::exhausted_no;
    bool used_fallback = false;
    std::optional<CoverPath> cover;
};

inline nlohmann::json to_json(const PipelineResult & r)
{
    nlohmann::json stages = nlohmann::json::array();
    for (const auto & s : r.stages)
        stages.push_back({{"stage", s.name}, {"status", s.status}, {"detail", s.detail}});
    nlohmann::json j = {{"verdict", to_string(r.verdict)}, {"failed_stage", r.failed_stage}, {"used_fallback", r.used_fallback}, {"stages", stages}};
    j["cycle"] = r.cycle ? to_json(*r.cycle) : nlohmann::json(nullptr);
    return j;
}

/// Which disjoint-path route applies: the matching-extension route for
/// ell < 3k/4, otherwise the star route.
inline bool uses_matching_route(int k, int ell) { return 4 * ell < 3 * k; }

/// Runs partition, classification, disjoint paths, cover path and completion,
/// then closes the cycle through the ends of the cover path. Every stage is
/// recorded; a failure names its stage.
inline PipelineResult assemble_hamilton_cycle(const Hypergraph & h, const GoodnessParams & params, const PipelineOptions & opt = {})
{
    PipelineResult out;
    const int k = params.k;
    const int ell = params.ell;
    auto fail = [&](const std::string & stage, SearchVerdict v, nlohmann::json detail) {
        out.stages.push_back({stage, "failed", std::move(detail)});
        out.failed_stage = stage;
        out.verdict = v;
        return out;
    };
    if (h.k() != k)
        throw InvalidArgument("parameters are for a different uniformity");
    if (h.n() % params.step() != 0)
        return fail("parameters", SearchVerdict::exhausted_no, {{"reason", "(k - ell) does not divide n"}});
    if (2 * ell <= k || k % params.step() == 0)
        return fail("parameters", SearchVerdict::exhausted_no, {{"reason", "needs k/2 < ell < k with (k - ell) not dividing k"}});
    out.stages.push_back({"parameters", "ok", to_json(params)});

    MinimizeOptions mopt = opt.partition;
    mopt.seed = detail::mix_seed(opt.seed, 100);
    const auto ext = is_delta_extremal(h, params, mopt);
    out.stages.push_back({"partition", "ok", to_json(ext)});
    const auto cls = classify(h, ext.witness, params);
    nlohmann::json cdetail = to_json(cls);
    if (opt.reports)
        cdetail["implications"] = to_json(classification_report(h, ext.witness, cls, params));
    out.stages.push_back({"classification", "ok", cdetail});

    if (cls.b_prime.empty()) {
        const auto res = find_hamilton_ell_cycle(h, ell, opt.fallback_budget, {1, 2});
        out.used_fallback = true;
        out.stages.push_back({"fallback-solver", res.verdict == SearchVerdict::found ? "ok" : "failed", to_json(res)});
        out.verdict = res.verdict;
        if (res.cycle)
            out.cycle = *res.cycle;
        else
            out.failed_stage = "fallback-solver";
        return out;
    }
    if (opt.require_extremal && ! ext.extremal)
        return fail("extremality", SearchVerdict::exhausted_no, {{"reason", "e(B) exceeds Delta n^k"}});

    const GoodnessOracle oracle(h, cls.b, params);
    if (opt.reports)
        out.stages.push_back({"good-set-degrees", "ok", to_json(good_set_degree_report(h, cls, oracle))});
    try {
        const bool matching_route = uses_matching_route(k, ell);
        DisjointPaths seeds;
        seeds.route = matching_route ? "matching-extension" : "star";
        seeds.s_star = matching_route ? 7 : params.s;
        if (cls.q > 0) {
            SearchBudget b = opt.steps.budget;
            seeds = matching_route ? disjoint_paths_matching(h, cls, oracle, cls.q, b) : disjoint_paths_star(h, cls, oracle, cls.q, b);
        }
        nlohmann::json ddetail = to_json(seeds);
        ddetail["slack_hypothesis"] = exact(min_ell_degree(h, k - 1)) >= params.threshold(h.n()) + Exact(k * k, 2);
        out.stages.push_back({"disjoint-paths", "ok", ddetail});

        StepOptions sopt = opt.steps;
        sopt.seed = detail::mix_seed(opt.seed, 200);
        sopt.enforce_avoid_bound = false;
        auto cover = build_cover_path(h, cls, oracle, seeds.paths, seeds.s_star, sopt);
        nlohmann::json qdetail = to_json(cover);
        if (opt.reports)
            qdetail["remainder"] = to_json(remainder_report(h, cls, cover, params));
        out.stages.push_back({"cover-path", "ok", qdetail});
        out.cover = cover;

        CompletionOptions copt = opt.completion;
        copt.seed = detail::mix_seed(opt.seed, 300);
        const Exact rho = Exact((2 * params.s + 1) * k) * params.eps1;
        const auto done = complete_hamilton_path(h, cover.a1, cover.b1, first_link_tuple(cover.path), last_link_tuple(cover.path), rho, copt);
        if (! done.path)
            return fail("completion", done.verdict, to_json(done));
        out.stages.push_back({"completion", "ok", to_json(done)});

        OrderedCycle c{k, ell, cover.path.vertices};
        c.vertices.insert(c.vertices.end(), done.path->vertices.begin() + ell, done.path->vertices.end() - ell);
        const auto verdict = check_hamilton_ell_cycle(h, c);
        if (! verdict)
            return fail("closing", SearchVerdict::exhausted_no, to_json(verdict));
        out.stages.push_back({"closing", "ok", to_json(verdict)});
        out.cycle = c;
        out.verdict = SearchVerdict::found;
        return out;
    }
    catch (const StageFailure & f) {
        return fail(f.stage(), f.verdict(), f.detail());
    }
}

} // namespace hamcycle

#endif // HAMCYCLE_EXTREMAL_HPP
