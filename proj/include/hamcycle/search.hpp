#ifndef HAMCYCLE_SEARCH_HPP
#define HAMCYCLE_SEARCH_HPP

#include <hamcycle/hypergraph.hpp>
#include <hamcycle/paths.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace hamcycle {

struct SearchBudget {
    std::optional<std::uint64_t> node_limit;
    std::optional<double> time_limit; // seconds

    void validate() const
    {
        if (node_limit && *node_limit == 0)
            throw InvalidArgument("node limit must be positive");
        if (time_limit && ! (*time_limit > 0))
            throw InvalidArgument("time limit must be positive");
    }
};

enum class SearchVerdict { found, exhausted_no, budget_exceeded };

inline const char * to_string(SearchVerdict v)
{
    switch (v) {
    case SearchVerdict::found: return "found";
    case SearchVerdict::exhausted_no: return "exhausted-no";
    case SearchVerdict::budget_exceeded: return "budget-exceeded";
    }
    return "unknown";
}

/// CLI exit code shared by all subcommands.
inline int exit_code(SearchVerdict v)
{
    switch (v) {
    case SearchVerdict::found: return 0;
    case SearchVerdict::exhausted_no: return 1;
    case SearchVerdict::budget_exceeded: return 2;
    }
    return 3;
}

struct SearchStats {
    std::uint64_t nodes = 0;
    int max_depth = 0;
    double seconds = 0;
};

struct SearchOutcome {
    SearchVerdict verdict = SearchVerdict::exhausted_no;
    std::optional<OrderedCycle> cycle;
    std::optional<OrderedPath> path;
    SearchStats stats;
};

/// Serialises the outcome. Wall time is left out unless asked for, so that
/// replays compare byte for byte.
inline nlohmann::json to_json(const SearchOutcome & o, bool with_time = false)
{
    nlohmann::json j = {{"verdict", to_string(o.verdict)}, {"nodes", o.stats.nodes}, {"max_depth", o.stats.max_depth}};
    j["cycle"] = o.cycle ? to_json(*o.cycle) : nlohmann::json(nullptr);
    if (o.path)
        j["path"] = to_json(*o.path);
    if (with_time)
        j["seconds"] = o.stats.seconds;
    return j;
}

struct SolverOptions {
    /// Worker threads; 0 means hardware concurrency.
    unsigned threads = 0;
    /// Number of leading free positions expanded before handing subtrees to workers.
    int split_depth = 2;
};

namespace detail {

    using Clock = std::chrono::steady_clock;

    inline double seconds_since(Clock::time_point t0)
    {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }

    /// Backtracking over cyclic sequences for a Hamilton ell-cycle.
    ///
    /// A cycle is represented with vertex 0 at some position r < k-ell (every
    /// cycle can be rotated by a multiple of k-ell into that block). The
    /// reflection p -> k-1-p, followed by such a rotation, moves vertex 0 to
    /// r' = (k-1-r) mod (k-ell); branches with r' < r are skipped, and for
    /// r' = r the orientation is fixed by rep[r + (k-ell)] < rep[r - (k-ell) mod n].
    class CycleSearch {
    public:
        CycleSearch(const Hypergraph & h, int ell) : h_(h), n_(h.n()), k_(h.k()), step_(h.k() - ell), ell_(ell) {}

        struct Branch {
            int anchor = 0;
            std::vector<Vertex> prefix; // vertices for the first free positions in fill order
        };

        struct Result {
            bool found = false;
            bool capped = false;
            std::uint64_t nodes = 0;
            int max_depth = 0;
            std::vector<Vertex> sequence;
        };

        std::vector<int> anchors() const
        {
            std::vector<int> out;
            for (int r = 0; r < step_; ++r) {
                const int rp = ((k_ - 1 - r) % step_ + step_) % step_;
                if (rp >= r)
                    out.push_back(r);
            }
            return out;
        }

        /// Enumerates the prefixes of the given depth reachable without violating any check.
        std::vector<Branch> branches(int depth)
        {
            std::vector<Branch> out;
            for (int r : anchors()) {
                setup(r);
                collect(0, depth, r, out);
            }
            return out;
        }

        /// Explores one branch; stop_flag is polled to abandon early.
        Result run(const Branch & b, std::uint64_t cap, const std::atomic<bool> & stop, Clock::time_point deadline, bool timed)
        {
            setup(b.anchor);
            Result res;
            cap_ = cap;
            nodes_ = 0;
            max_depth_ = 0;
            stop_ = &stop;
            deadline_ = deadline;
            timed_ = timed;
            capped_ = false;
            for (std::size_t i = 0; i < b.prefix.size(); ++i) {
                if (! place(static_cast<int>(i), b.prefix[i]))
                    return res;
            }
            res.found = dfs(static_cast<int>(b.prefix.size()));
            res.capped = capped_;
            res.nodes = nodes_;
            res.max_depth = max_depth_;
            if (res.found)
                res.sequence = seq_;
            return res;
        }

    private:
        void setup(int r)
        {
            anchor_ = r;
            seq_.assign(static_cast<std::size_t>(n_), -1);
            seq_[static_cast<std::size_t>(r)] = 0;
            used_ = VertexSet::of({0});
            order_.clear();
            for (int p = 0; p < n_; ++p)
                if (p != r)
                    order_.push_back(p);
            // rank of each position in the fill order; the anchor counts as filled first
            std::vector<int> rank(static_cast<std::size_t>(n_));
            rank[static_cast<std::size_t>(r)] = -1;
            for (std::size_t i = 0; i < order_.size(); ++i)
                rank[static_cast<std::size_t>(order_[i])] = static_cast<int>(i);
            completes_.assign(order_.size(), {});
            almost_.assign(order_.size(), {});
            for (int w = 0; w < n_ / step_; ++w) {
                std::vector<int> ranks;
                for (int p = 0; p < k_; ++p)
                    ranks.push_back(rank[static_cast<std::size_t>((w * step_ + p) % n_)]);
                std::sort(ranks.begin(), ranks.end());
                completes_[static_cast<std::size_t>(ranks.back())].push_back(w);
                if (ranks[static_cast<std::size_t>(k_ - 2)] >= 0)
                    almost_[static_cast<std::size_t>(ranks[static_cast<std::size_t>(k_ - 2)])].push_back(w);
            }
            const int rp = ((k_ - 1 - r) % step_ + step_) % step_;
            orient_a_ = orient_b_ = -1;
            if (rp == r) {
                const int a = r + step_;
                const int b = ((r - step_) % n_ + n_) % n_;
                if (a != b) {
                    orient_a_ = a;
                    orient_b_ = b;
                }
            }
        }

        VertexSet window(int w) const
        {
            VertexSet e;
            for (int p = 0; p < k_; ++p)
                e = e.with(seq_[static_cast<std::size_t>((w * step_ + p) % n_)]);
            return e;
        }

        /// The filled k-1 positions of window w.
        VertexSet partial_window(int w) const
        {
            VertexSet e;
            for (int p = 0; p < k_; ++p) {
                const Vertex v = seq_[static_cast<std::size_t>((w * step_ + p) % n_)];
                if (v >= 0)
                    e = e.with(v);
            }
            return e;
        }

        bool admissible(int idx, Vertex v)
        {
            const int pos = order_[static_cast<std::size_t>(idx)];
            if (pos == orient_b_ && seq_[static_cast<std::size_t>(orient_a_)] > v)
                return false;
            if (pos == orient_a_ && seq_[static_cast<std::size_t>(orient_b_)] >= 0 && v > seq_[static_cast<std::size_t>(orient_b_)])
                return false;
            seq_[static_cast<std::size_t>(pos)] = v;
            bool ok = true;
            for (int w : completes_[static_cast<std::size_t>(idx)])
                if (! h_.has_edge(window(w))) {
                    ok = false;
                    break;
                }
            if (ok)
                for (int w : almost_[static_cast<std::size_t>(idx)]) {
                    if (h_.codegree(partial_window(w)) == 0) {
                        ok = false;
                        break;
                    }
                }
            seq_[static_cast<std::size_t>(pos)] = -1;
            return ok;
        }

        bool place(int idx, Vertex v)
        {
            if (used_.contains(v) || ! admissible(idx, v))
                return false;
            seq_[static_cast<std::size_t>(order_[static_cast<std::size_t>(idx)])] = v;
            used_ = used_.with(v);
            return true;
        }

        void unplace(int idx)
        {
            auto & slot = seq_[static_cast<std::size_t>(order_[static_cast<std::size_t>(idx)])];
            used_ = used_.without(slot);
            slot = -1;
        }

        /// Candidates for position idx, ordered by ascending co-degree of the
        /// trailing (k-1)-set they would close, ties by vertex id.
        std::vector<Vertex> candidates(int idx)
        {
            std::vector<std::pair<int, Vertex>> scored;
            const int pos = order_[static_cast<std::size_t>(idx)];
            VertexSet trail;
            bool full_trail = pos >= k_ - 2;
            if (full_trail)
                for (int p = pos - (k_ - 2); p < pos; ++p)
                    trail = trail.with(seq_[static_cast<std::size_t>(p)]);
            for (Vertex v = 0; v < n_; ++v) {
                if (used_.contains(v) || ! admissible(idx, v))
                    continue;
                scored.emplace_back(full_trail ? h_.codegree(trail.with(v)) : 0, v);
            }
            std::sort(scored.begin(), scored.end());
            std::vector<Vertex> out;
            out.reserve(scored.size());
            for (auto [score, v] : scored)
                out.push_back(v);
            return out;
        }

        bool dfs(int idx)
        {
            if (idx == static_cast<int>(order_.size()))
                return true;
            for (Vertex v : candidates(idx)) {
                if (capped_)
                    return false;
                if (nodes_ >= cap_ || stop_->load(std::memory_order_relaxed)
                    || (timed_ && (nodes_ & 1023) == 0 && Clock::now() > deadline_)) {
                    capped_ = true;
                    return false;
                }
                ++nodes_;
                max_depth_ = std::max(max_depth_, idx + 1);
                place(idx, v);
                if (dfs(idx + 1))
                    return true;
                unplace(idx);
            }
            return false;
        }

        void collect(int idx, int depth, int r, std::vector<Branch> & out)
        {
            if (idx == depth || idx == static_cast<int>(order_.size())) {
                Branch b{r, {}};
                for (int i = 0; i < idx; ++i)
                    b.prefix.push_back(seq_[static_cast<std::size_t>(order_[static_cast<std::size_t>(i)])]);
                out.push_back(std::move(b));
                return;
            }
            for (Vertex v : candidates(idx)) {
                place(idx, v);
                collect(idx + 1, depth, r, out);
                unplace(idx);
            }
        }

        const Hypergraph & h_;
        int n_, k_, step_, ell_;
        int anchor_ = 0;
        std::vector<Vertex> seq_;
        VertexSet used_;
        std::vector<int> order_;
        std::vector<std::vector<int>> completes_;
        std::vector<std::vector<int>> almost_;
        int orient_a_ = -1, orient_b_ = -1;
        std::uint64_t cap_ = 0, nodes_ = 0;
        int max_depth_ = 0;
        bool capped_ = false, timed_ = false;
        const std::atomic<bool> * stop_ = nullptr;
        Clock::time_point deadline_;
    };

} // namespace detail

/// Exact search for a Hamilton ell-cycle.
///
/// Subtrees below the first split_depth free positions are explored in
/// parallel. The outcome equals that of the sequential search visiting the
/// subtrees in order: the certificate comes from the first subtree that holds
/// one, and the node count is the sum over the subtrees up to that one. A node
/// limit is charged the same way, so outcomes under a node limit are
/// reproducible; a time limit is not.
inline SearchOutcome find_hamilton_ell_cycle(const Hypergraph & h, int ell, const SearchBudget & budget = {},
                                             const SolverOptions & opts = {})
{
    budget.validate();
    if (ell < 1 || ell >= h.k())
        throw InvalidArgument("ell must satisfy 1 <= ell < k");
    const auto t0 = detail::Clock::now();
    SearchOutcome out;
    const int step = h.k() - ell;
    const int n = h.n();
    if (n % step != 0 || n < 2 * h.k() - ell) {
        out.verdict = SearchVerdict::exhausted_no;
        return out;
    }
    (void)h.codegree_index();

    detail::CycleSearch root(h, ell);
    auto branches = root.branches(std::max(0, opts.split_depth));
    const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
    const bool timed = budget.time_limit.has_value();
    const auto deadline = t0 + std::chrono::duration_cast<detail::Clock::duration>(std::chrono::duration<double>(budget.time_limit.value_or(0)));

    std::vector<detail::CycleSearch::Result> results(branches.size());
    std::vector<char> done(branches.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_found{branches.size()};
    std::atomic<bool> stop{false};
    std::vector<std::unique_ptr<std::atomic<bool>>> cancel;
    for (std::size_t i = 0; i < branches.size(); ++i)
        cancel.push_back(std::make_unique<std::atomic<bool>>(false));
    std::mutex mu;

    auto worker = [&] {
        detail::CycleSearch search(h, ell);
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= branches.size() || stop.load())
                return;
            if (i > first_found.load()) {
                std::lock_guard lock(mu);
                done[i] = 1;
                continue;
            }
            auto res = search.run(branches[i], cap, *cancel[i], deadline, timed);
            std::lock_guard lock(mu);
            results[i] = std::move(res);
            done[i] = 1;
            if (results[i].found) {
                std::size_t cur = first_found.load();
                while (i < cur && ! first_found.compare_exchange_weak(cur, i)) {
                }
                for (std::size_t j = i + 1; j < branches.size(); ++j)
                    cancel[j]->store(true);
            }
            // Stop early once the finished prefix already exhausts the node limit.
            std::uint64_t prefix = 0;
            for (std::size_t j = 0; j < branches.size() && done[j]; ++j) {
                prefix += results[j].nodes;
                if (results[j].found || results[j].capped || prefix >= cap) {
                    if (! results[j].found)
                        stop.store(true);
                    break;
                }
            }
            if (stop.load())
                for (auto & c : cancel)
                    c->store(true);
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, branches.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto & t : pool)
        t.join();

    // Replay the branches in order, as the sequential search would.
    out.stats.max_depth = 0;
    std::uint64_t total = 0;
    out.verdict = SearchVerdict::exhausted_no;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const auto & r = results[i];
        if (! done[i] || (r.capped && ! r.found) || total + r.nodes > cap) {
            out.verdict = SearchVerdict::budget_exceeded;
            total = std::min(cap, total + r.nodes);
            break;
        }
        total += r.nodes;
        out.stats.max_depth = std::max(out.stats.max_depth, r.max_depth + static_cast<int>(branches[i].prefix.size()));
        if (r.found) {
            out.verdict = SearchVerdict::found;
            out.cycle = normalized(OrderedCycle{h.k(), ell, r.sequence});
            break;
        }
    }
    if (branches.empty())
        out.verdict = SearchVerdict::exhausted_no;
    out.stats.nodes = total;
    out.stats.seconds = detail::seconds_since(t0);
    return out;
}

/// Upper bound on ex(n, P_r^k) for the tight path with r edges.
inline Rational turan_bound(int n, int k, int r)
{
    if (n < 1 || k < 2 || r < 1)
        throw InvalidArgument("turan_bound needs n >= 1, k >= 2, r >= 1");
    const auto c = static_cast<long long>(binom(n, k - 1));
    if (k % 2 == 0)
        return Rational(r - 1, 2) * c;
    return Rational(r + (r - 1) / k, 2) * c;
}

struct TuranResult {
    SearchVerdict verdict = SearchVerdict::exhausted_no; // found = exact value established
    std::uint64_t value = 0;                              // best edge count seen
    std::vector<VertexSet> witness;                        // extremal edge set
    std::uint64_t nodes = 0;
};

/// True iff the edge set (on vertices 0..n-1) contains a tight path with r edges that uses e.
inline bool tight_path_through(const std::unordered_set<VertexSet, VertexSetHash> & edges, VertexSet e, int n, int k, int r)
{
    if (r <= 1)
        return true;
    std::vector<Vertex> seq = e.members();
    auto tail = [&](bool right) {
        VertexSet t;
        if (right)
            for (std::size_t i = seq.size() - static_cast<std::size_t>(k - 1); i < seq.size(); ++i)
                t = t.with(seq[i]);
        else
            for (int i = 0; i < k - 1; ++i)
                t = t.with(seq[static_cast<std::size_t>(i)]);
        return t;
    };
    std::function<bool(int)> grow_left = [&](int want) -> bool {
        if (want == 0)
            return true;
        const VertexSet t = tail(false);
        const VertexSet used = VertexSet::from(seq);
        for (Vertex v = 0; v < n; ++v) {
            if (used.contains(v) || ! edges.contains(t.with(v)))
                continue;
            seq.insert(seq.begin(), v);
            const bool ok = grow_left(want - 1);
            seq.erase(seq.begin());
            if (ok)
                return true;
        }
        return false;
    };
    // e sits at some index d of the path: d edges to its left, r-1-d to its right.
    std::function<bool(int)> grow_right = [&](int done) -> bool {
        if (grow_left(r - 1 - done))
            return true;
        if (done == r - 1)
            return false;
        const VertexSet t = tail(true);
        const VertexSet used = VertexSet::from(seq);
        for (Vertex v = 0; v < n; ++v) {
            if (used.contains(v) || ! edges.contains(t.with(v)))
                continue;
            seq.push_back(v);
            const bool ok = grow_right(done + 1);
            seq.pop_back();
            if (ok)
                return true;
        }
        return false;
    };
    do {
        if (grow_right(0))
            return true;
    } while (std::next_permutation(seq.begin(), seq.end()));
    return false;
}

/// Exact ex(n, P_r^k) by branch and bound over the k-sets in lexicographic order.
inline TuranResult turan_bruteforce(int n, int k, int r, const SearchBudget & budget = {})
{
    budget.validate();
    if (n < 1 || n > kMaxVertices || k < 2 || r < 1)
        throw InvalidArgument("turan_bruteforce needs 1 <= n <= 64, k >= 2, r >= 1");
    TuranResult res;
    if (k > n) {
        res.verdict = SearchVerdict::found;
        return res;
    }
    std::vector<VertexSet> all;
    for_each_combination(VertexSet::range(n), k, [&](VertexSet e) { all.push_back(e); });
    if (k + r - 1 > n) {
        res.verdict = SearchVerdict::found;
        res.value = all.size();
        res.witness = all;
        return res;
    }
    if (r == 1) {
        res.verdict = SearchVerdict::found;
        return res;
    }
    const auto t0 = detail::Clock::now();
    const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
    std::unordered_set<VertexSet, VertexSetHash> current;
    std::vector<VertexSet> chosen;
    bool capped = false;
    // Any non-empty extremal family can be relabelled to contain {0..k-1},
    // the first set in the order.
    std::function<void(std::size_t)> dfs = [&](std::size_t i) {
        if (capped)
            return;
        if (++res.nodes > cap || (budget.time_limit && (res.nodes & 255) == 0 && detail::seconds_since(t0) > *budget.time_limit)) {
            capped = true;
            return;
        }
        if (current.size() > res.value) {
            res.value = current.size();
            res.witness = chosen;
        }
        if (i == all.size() || current.size() + (all.size() - i) <= res.value)
            return;
        const VertexSet e = all[i];
        current.insert(e);
        if (! tight_path_through(current, e, n, k, r)) {
            chosen.push_back(e);
            dfs(i + 1);
            chosen.pop_back();
        }
        current.erase(e);
        if (i > 0)
            dfs(i + 1);
    };
    dfs(0);
    std::sort(res.witness.begin(), res.witness.end(), [](VertexSet a, VertexSet b) { return lex_less(a, b); });
    res.verdict = capped ? SearchVerdict::budget_exceeded : SearchVerdict::found;
    return res;
}

/// First (in lexicographic order of edge lists) family of `size` pairwise
/// disjoint edges avoiding `avoid` and passing the filter.
inline std::optional<std::vector<VertexSet>> find_matching_avoiding(const Hypergraph & h, int size, VertexSet avoid,
                                                                   const std::function<bool(VertexSet)> & edge_filter = {},
                                                                   const SearchBudget & budget = {})
{
    budget.validate();
    if (size < 0)
        throw InvalidArgument("matching size must be non-negative");
    if (size == 0)
        return std::vector<VertexSet>{};
    std::vector<VertexSet> pool;
    for (VertexSet e : h.edges())
        if (e.disjoint_from(avoid) && (! edge_filter || edge_filter(e)))
            pool.push_back(e);
    const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
    std::uint64_t nodes = 0;
    std::vector<VertexSet> chosen;
    std::function<bool(std::size_t, VertexSet)> dfs = [&](std::size_t from, VertexSet used) -> bool {
        if (static_cast<int>(chosen.size()) == size)
            return true;
        if (static_cast<int>(pool.size() - from) < size - static_cast<int>(chosen.size()))
            return false;
        for (std::size_t i = from; i < pool.size(); ++i) {
            if (! pool[i].disjoint_from(used))
                continue;
            if (++nodes > cap)
                return false;
            chosen.push_back(pool[i]);
            if (dfs(i + 1, used | pool[i]))
                return true;
            chosen.pop_back();
        }
        return false;
    };
    if (dfs(0, VertexSet{}))
        return chosen;
    return std::nullopt;
}

/// Tight (k-1)-uniform path with r edges in the link of u: a sequence of
/// k+r-2 vertices outside `forbidden` whose k-1 consecutive windows all
/// complete to edges with u (and pass the filter, if given).
inline std::optional<std::vector<Vertex>> find_link_tight_path(const Hypergraph & h, Vertex u, VertexSet forbidden, int r,
                                                               const std::function<bool(VertexSet)> & window_filter = {},
                                                               const SearchBudget & budget = {})
{
    if (r < 1)
        throw InvalidArgument("tight path length must be at least 1");
    const int w = h.k() - 1;
    const int len = w + r - 1;
    const VertexSet blocked = forbidden.with(u);
    std::vector<VertexSet> windows;
    for (VertexSet e : h.edges())
        if (e.contains(u) && e.disjoint_from(forbidden)) {
            const VertexSet f = e.without(u);
            if (! window_filter || window_filter(f))
                windows.push_back(f);
        }
    if (windows.empty())
        return std::nullopt;
    std::unordered_set<VertexSet, VertexSetHash> in_link(windows.begin(), windows.end());
    const std::uint64_t cap = budget.node_limit.value_or(std::numeric_limits<std::uint64_t>::max());
    std::uint64_t nodes = 0;
    std::vector<Vertex> seq;
    std::function<bool()> dfs = [&]() -> bool {
        if (static_cast<int>(seq.size()) == len)
            return true;
        if (++nodes > cap)
            return false;
        const VertexSet used = VertexSet::from(seq) | blocked;
        for (Vertex v = 0; v < h.n(); ++v) {
            if (used.contains(v))
                continue;
            seq.push_back(v);
            bool ok = true;
            if (static_cast<int>(seq.size()) >= w) {
                VertexSet win;
                for (std::size_t i = seq.size() - static_cast<std::size_t>(w); i < seq.size(); ++i)
                    win = win.with(seq[i]);
                ok = in_link.contains(win);
            }
            if (ok && dfs())
                return true;
            seq.pop_back();
        }
        return false;
    };
    if (dfs())
        return seq;
    return std::nullopt;
}

/// Finds a tight path of length k in the link of u, inserts u after its first
/// k-1 vertices (a k-uniform tight path of order 2k-1 through u), and cuts out
/// an ell-path of length s with at least ell vertices on each side of u.
inline std::optional<OrderedPath> find_tight_path_in_link(const Hypergraph & h, Vertex u, VertexSet forbidden, int ell,
                                                          const std::function<bool(VertexSet)> & window_filter = {},
                                                          const SearchBudget & budget = {})
{
    const int k = h.k();
    if (ell < 1 || ell >= k)
        throw InvalidArgument("ell must satisfy 1 <= ell < k");
    const auto link_path = find_link_tight_path(h, u, forbidden, k, window_filter, budget);
    if (! link_path)
        return std::nullopt;
    std::vector<Vertex> lifted(link_path->begin(), link_path->begin() + (k - 1));
    lifted.push_back(u);
    lifted.insert(lifted.end(), link_path->begin() + (k - 1), link_path->end());
    const int s = ell_cycle_s(k, ell);
    const int order = ell + s * (k - ell);
    // u sits at index k-1 of the order-(2k-1) sequence; centre it in the cut.
    int start = (2 * k - 1 - order) / 2;
    start = std::clamp(start, std::max(0, k - 1 - (order - 1 - ell)), std::min(2 * k - 1 - order, k - 1 - ell));
    OrderedPath p{k, ell, std::vector<Vertex>(lifted.begin() + start, lifted.begin() + start + order)};
    return p;
}

} // namespace hamcycle

#endif // HAMCYCLE_SEARCH_HPP
