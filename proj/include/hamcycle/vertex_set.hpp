#ifndef HAMCYCLE_VERTEX_SET_HPP
#define HAMCYCLE_VERTEX_SET_HPP

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace hamcycle {

using Vertex = int;

/// Hypergraphs in this library live on at most 64 vertices.
inline constexpr int kMaxVertices = 64;

class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A query that is well-formed but not defined for the given arguments
/// (e.g. the degree of a set with at least k vertices).
class InvalidQuery : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Subset of {0, ..., 63} with bitset semantics. Also used for edges.
class VertexSet {
public:
    constexpr VertexSet() = default;
    constexpr explicit VertexSet(std::uint64_t bits) : bits_(bits) {}

    static VertexSet of(std::initializer_list<Vertex> vs) { return from(std::span<const Vertex>(vs.begin(), vs.size())); }

    static VertexSet from(std::span<const Vertex> vs)
    {
        VertexSet s;
        for (Vertex v : vs)
            s.insert(v);
        return s;
    }

    /// {0, ..., n-1}
    static constexpr VertexSet range(int n) { return VertexSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1)); }

    [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
    [[nodiscard]] constexpr int size() const { return std::popcount(bits_); }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr bool contains(Vertex v) const { return v >= 0 && v < 64 && ((bits_ >> v) & 1U); }

    void insert(Vertex v)
    {
        if (v < 0 || v >= kMaxVertices)
            throw InvalidArgument("vertex id " + std::to_string(v) + " outside 0..63");
        bits_ |= std::uint64_t{1} << v;
    }

    constexpr void erase(Vertex v)
    {
        if (v >= 0 && v < 64)
            bits_ &= ~(std::uint64_t{1} << v);
    }

    [[nodiscard]] constexpr VertexSet with(Vertex v) const { return VertexSet(bits_ | (std::uint64_t{1} << v)); }
    [[nodiscard]] constexpr VertexSet without(Vertex v) const { return VertexSet(bits_ & ~(std::uint64_t{1} << v)); }

    [[nodiscard]] constexpr Vertex min() const { return bits_ ? std::countr_zero(bits_) : -1; }
    [[nodiscard]] constexpr Vertex max() const { return bits_ ? 63 - std::countl_zero(bits_) : -1; }

    [[nodiscard]] constexpr bool subset_of(VertexSet o) const { return (bits_ & ~o.bits_) == 0; }
    [[nodiscard]] constexpr bool disjoint_from(VertexSet o) const { return (bits_ & o.bits_) == 0; }
    [[nodiscard]] constexpr bool within_range(int n) const { return subset_of(range(n)); }

    [[nodiscard]] std::vector<Vertex> members() const
    {
        std::vector<Vertex> out;
        out.reserve(static_cast<std::size_t>(size()));
        for_each([&](Vertex v) { out.push_back(v); });
        return out;
    }

    template <class F>
    constexpr void for_each(F && f) const
    {
        for (std::uint64_t b = bits_; b; b &= b - 1)
            f(static_cast<Vertex>(std::countr_zero(b)));
    }

    friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return VertexSet(a.bits_ | b.bits_); }
    friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & b.bits_); }
    friend constexpr VertexSet operator-(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & ~b.bits_); }
    VertexSet & operator|=(VertexSet o) { bits_ |= o.bits_; return *this; }
    VertexSet & operator&=(VertexSet o) { bits_ &= o.bits_; return *this; }
    VertexSet & operator-=(VertexSet o) { bits_ &= ~o.bits_; return *this; }

    friend constexpr bool operator==(VertexSet, VertexSet) = default;

    /// Lexicographic order of the sorted member tuples (for equal-size sets).
    friend constexpr bool lex_less(VertexSet a, VertexSet b)
    {
        const std::uint64_t diff = a.bits_ ^ b.bits_;
        if (diff == 0)
            return false;
        const std::uint64_t low = diff & (~diff + 1);
        return (a.bits_ & low) != 0;
    }

private:
    std::uint64_t bits_ = 0;
};

struct VertexSetHash {
    std::size_t operator()(VertexSet s) const noexcept
    {
        std::uint64_t x = s.bits();
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        x *= 0xc4ceb9fe1a85ec53ULL;
        x ^= x >> 33;
        return static_cast<std::size_t>(x);
    }
};

namespace detail {

    inline constexpr auto binomial_table = [] {
        std::array<std::array<std::uint64_t, 65>, 65> t{};
        for (int n = 0; n <= 64; ++n) {
            t[n][0] = 1;
            for (int r = 1; r <= n; ++r)
                t[n][r] = t[n - 1][r - 1] + (r <= n - 1 ? t[n - 1][r] : 0);
        }
        return t;
    }();

} // namespace detail

/// C(n, r); zero outside 0 <= r <= n. Exact for n <= 64.
[[nodiscard]] constexpr std::uint64_t binom(long long n, long long r)
{
    if (r < 0 || n < 0 || r > n)
        return 0;
    if (n <= 64)
        return detail::binomial_table[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
    if (r > n - r)
        r = n - r;
    std::uint64_t result = 1;
    for (long long i = 1; i <= r; ++i)
        result = result * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return result;
}

/// Enumerates the r-subsets of `pool` in lexicographic order of their
/// sorted tuples. `f` receives a VertexSet and may return bool; returning
/// false stops the enumeration. Returns false iff stopped early.
template <class F>
bool for_each_combination(VertexSet pool, int r, F && f)
{
    if (r < 0 || r > pool.size())
        return true;
    const std::vector<Vertex> items = pool.members();
    const int m = static_cast<int>(items.size());
    std::vector<int> idx(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i)
        idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::uint64_t bits = 0;
        for (int i : idx)
            bits |= std::uint64_t{1} << items[static_cast<std::size_t>(i)];
        if constexpr (std::is_same_v<std::invoke_result_t<F, VertexSet>, bool>) {
            if (! f(VertexSet(bits)))
                return false;
        }
        else
            f(VertexSet(bits));

        int i = r - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - r + i)
            --i;
        if (i < 0)
            return true;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

/// Colex rank of a set among all sets of the same size.
[[nodiscard]] inline std::uint64_t colex_rank(VertexSet s)
{
    std::uint64_t rank = 0;
    int i = 1;
    s.for_each([&](Vertex v) { rank += binom(v, i++); });
    return rank;
}

[[nodiscard]] inline VertexSet colex_unrank(std::uint64_t rank, int size)
{
    VertexSet s;
    for (int i = size; i >= 1; --i) {
        Vertex v = i - 1;
        while (binom(v + 1, i) <= rank)
            ++v;
        rank -= binom(v, i);
        s.insert(v);
    }
    return s;
}

[[nodiscard]] inline std::string to_string(VertexSet s)
{
    std::string out = "{";
    bool first = true;
    s.for_each([&](Vertex v) {
        if (! first)
            out += ",";
        out += std::to_string(v);
        first = false;
    });
    return out + "}";
}

} // namespace hamcycle

#endif // HAMCYCLE_VERTEX_SET_HPP
