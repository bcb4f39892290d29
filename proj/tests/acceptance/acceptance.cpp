// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if
// all pass. Every check recomputes its ground truth on the test side.

#include <hamcycle/experiments.hpp>

#include "support/instances.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace hamcycle;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Pinned tolerances.
constexpr double kBracketSecsA = 60;
constexpr double kBracketSecsB = 120;
constexpr double kTilingEps = 0.1;
constexpr long double kLllOffset = 1e-9L;

Outcome bracket(int n, int k, int ell, double limit)
{
    const auto t0 = Clock::now();
    const auto below = space_barrier(n, k, ell);
    const auto at = barrier_plus_slack(n, k, ell, 1);
    const auto no = find_hamilton_ell_cycle(below.graph, ell);
    const auto yes = find_hamilton_ell_cycle(at.graph, ell);
    const double secs = since(t0);
    const std::uint64_t d_no = oracle::min_degree(below.graph, k - 1);
    const std::uint64_t d_yes = oracle::min_degree(at.graph, k - 1);
    const bool pass = d_no == 1 && d_yes == 2 && no.verdict == SearchVerdict::exhausted_no && yes.verdict == SearchVerdict::found &&
                      yes.cycle && check_hamilton_ell_cycle(at.graph, *yes.cycle).ok && below.certificate.proves_no_cycle() && secs <= limit;
    std::ostringstream os;
    os << "delta=" << d_no << " " << to_string(no.verdict) << " (" << no.stats.nodes << " nodes), delta=" << d_yes << " "
       << to_string(yes.verdict) << ", threshold " << fraction_string(codegree_threshold(n, k, ell)) << ", " << std::fixed
       << std::setprecision(2) << secs << "s <= " << limit << "s";
    return {pass, os.str()};
}

Outcome solver_vs_permutations()
{
    int checked = 0;
    int disagreements = 0;
    auto check = [&](const Hypergraph & h) {
        const bool fast = find_hamilton_ell_cycle(h, 2).verdict == SearchVerdict::found;
        disagreements += fast != oracle::hamiltonian_by_permutations(h, 2);
        ++checked;
    };
    auto from_mask = [](int n, std::uint64_t mask) {
        const auto all = oracle::subsets_of_size(n, 3);
        Hypergraph h(n, 3);
        for (std::size_t i = 0; i < all.size(); ++i)
            if (mask >> i & 1)
                h.add_edge(VertexSet::from(all[i]));
        return h;
    };
    for (int n = 3; n <= 5; ++n) {
        const auto m = oracle::binomial(n, 3);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
            check(from_mask(n, mask));
    }
    const int complete = checked;
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i)
        check(from_mask(6, rng() & ((std::uint64_t{1} << 20) - 1)));
    return {disagreements == 0, std::to_string(checked) + " instances (" + std::to_string(complete) + " exhaustive for n<=5, 10000 sampled at n=6), " +
                                    std::to_string(disagreements) + " disagreements"};
}

Outcome turan_grid()
{
    int cells = 0;
    int bad = 0;
    for (int k : {2, 3})
        for (int r = 1; r <= 4; ++r)
            for (int n = k; n <= 7; ++n) {
                const auto res = turan_bruteforce(n, k, r);
                ++cells;
                if (res.verdict == SearchVerdict::budget_exceeded || Rational(static_cast<long long>(res.value)) > turan_bound(n, k, r))
                    ++bad;
            }
    const auto five = turan_bruteforce(5, 2, 2);
    const bool exact = five.verdict != SearchVerdict::budget_exceeded && five.value == 2;
    return {bad == 0 && exact, std::to_string(cells) + " cells exhaustive, " + std::to_string(bad) + " above bound; ex(5,2,2)=" + std::to_string(five.value)};
}

Outcome coloring_suite()
{
    int cases = 0;
    int failures = 0;
    for (int k = 3; k <= 7; ++k)
        for (int ell = 1; ell < k; ++ell)
            for (int lambda = 1; lambda <= 3; ++lambda) {
                const int s = ell_cycle_s(k, ell);
                OrderedPath p{k, ell, {}};
                for (int i = 0; i < ell + lambda * s * (k - ell); ++i)
                    p.vertices.push_back(i);
                const auto c = color_path(p, lambda);
                std::vector<int> sizes(static_cast<std::size_t>(k + 1), 0);
                for (int col : c.colors)
                    ++sizes[static_cast<std::size_t>(col)];
                bool ok = sizes[static_cast<std::size_t>(k)] == lambda;
                const auto [lo, hi] = std::minmax_element(sizes.begin() + 1, sizes.begin() + k);
                ok = ok && *hi - *lo <= 1;
                for (int e = 0; ok && e * (k - ell) + k <= static_cast<int>(p.vertices.size()); ++e) {
                    bool hit = false;
                    for (int j = 0; j < k; ++j)
                        hit |= c.colors[static_cast<std::size_t>(e * (k - ell) + j)] == k;
                    ok = hit;
                }
                ++cases;
                failures += ! ok;
            }
    return {failures == 0, std::to_string(cases) + " (k, ell, lambda) cases, " + std::to_string(failures) + " failures"};
}

Outcome tiling_suite()
{
    int cases = 0;
    int failures = 0;
    for (int k = 3; k <= 5; ++k)
        for (int ell = 1; ell < k; ++ell)
            for (int m = 1; m <= 4; ++m) {
                const auto g = regular_tuple(k, ell, m, 1.0, 0);
                const auto rep = tile_with_canonical_paths(g, ell, m, kTilingEps);
                const int s = ell_cycle_s(k, ell);
                std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
                bool ok = ! rep.paths.empty();
                int covered = 0;
                for (const auto & cp : rep.paths) {
                    ok = ok && is_canonical(cp.path, g) && path_in_kpartite(cp.path, g);
                    for (Vertex v : cp.path.vertices) {
                        ok = ok && ! seen[static_cast<std::size_t>(v)];
                        seen[static_cast<std::size_t>(v)] = 1;
                        ++covered;
                    }
                }
                const int uncovered = g.vertex_count() - covered;
                ok = ok && uncovered == rep.uncovered && uncovered <= 3.0 * s * k * k * kTilingEps * m;
                ++cases;
                failures += ! ok;
            }
    return {failures == 0, std::to_string(cases) + " complete tuples (k<=5, m<=4, eps=0.1), " + std::to_string(failures) + " failures"};
}

Outcome census_suite()
{
    int instances = 0;
    int sparse_b = 0;
    int violations = 0;
    int recount_mismatch = 0;
    for (auto [k, ell, inside] : std::vector<std::array<int, 3>>{{4, 3, 2}, {5, 3, 3}})
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto prm = GoodnessParams::cascade(k, ell, Exact(3, 10));
            Hypergraph h(14, k);
            const VertexSet b = VertexSet::range(12);
            add_random_edges_inside(h, b, inside, seed);
            const auto c = census(h, b, prm, {prm.eps1, prm.eps1 * prm.eps1 / 3, prm.eps2});
            ++instances;
            if (! c.sparse_b)
                continue;
            ++sparse_b;
            for (const auto & row : c.rows) {
                violations += ! row.pass;
                if (row.statement != "bad-sets")
                    continue;
                std::uint64_t raw = 0;
                for (const auto & l : oracle::subsets_of_size(12, row.size)) {
                    std::uint64_t deg = 0;
                    for (VertexSet e : h.edges())
                        deg += e.subset_of(b) && oracle::contains_all(e.members(), l);
                    raw += exact(deg) > row.beta * exact(oracle::binomial(12, k - row.size));
                }
                recount_mismatch += raw != row.count;
            }
        }
    return {sparse_b >= 20 && violations == 0 && recount_mismatch == 0,
            std::to_string(sparse_b) + "/" + std::to_string(instances) + " instances satisfy e(B) <= eps0 C(|B|,k), " + std::to_string(violations) +
                " violations, " + std::to_string(recount_mismatch) + " recount mismatches"};
}

struct PipelineCase {
    Hypergraph graph;
    GoodnessParams params;
    PipelineOptions options;
    std::string name;
};

std::vector<PipelineCase> balance_suite_cases()
{
    std::vector<PipelineCase> out;
    const int removes[] = {0, 30, 40, 50};
    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        const instances::Variant v{12, 5, 3, 1, seed, removes[seed % 4], static_cast<int>(seed % 4)};
        PipelineOptions opt;
        opt.seed = seed;
        out.push_back({instances::barrier_variant(v), GoodnessParams::desk(5, 3), opt, instances::describe(v)});
    }
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const instances::Variant v{16, 7, 5, 1, seed, 0, static_cast<int>(seed % 2)};
        PipelineOptions opt;
        opt.seed = seed;
        out.push_back({instances::barrier_variant(v), GoodnessParams::desk(7, 5), opt, instances::describe(v)});
    }
    for (std::uint64_t seed = 0; seed < 2; ++seed) {
        const instances::Variant v{24, 5, 3, 2, seed};
        PipelineOptions opt;
        opt.seed = seed;
        opt.require_extremal = false;
        out.push_back({instances::barrier_variant(v), GoodnessParams::desk(5, 3), opt, instances::describe(v)});
    }
    return out;
}

Outcome balance_identity()
{
    int successes = 0;
    int failures = 0;
    int broken = 0;
    std::string first_broken;
    std::string no_cover;
    for (const auto & c : balance_suite_cases()) {
        const auto r = assemble_hamilton_cycle(c.graph, c.params, c.options);
        if (! r.cycle || ! r.cover) {
            if (failures++ == 0)
                no_cover = "; no cover: " + c.name + " at " + r.failed_stage;
            continue;
        }
        ++successes;
        const int k = c.params.k;
        const int ell = c.params.ell;
        const int s = c.params.s;
        const auto & cp = *r.cover;
        // Recompute the leftover sets from the cover path itself.
        VertexSet interior;
        for (std::size_t i = static_cast<std::size_t>(ell); i + static_cast<std::size_t>(ell) < cp.path.vertices.size(); ++i)
            interior = interior.with(cp.path.vertices[i]);
        const VertexSet rest = c.graph.vertices() - interior;
        const bool ok = (cp.a1 & cp.b1).empty() && (cp.a1 | cp.b1) == rest && cp.b1.size() == (s * k - s * ell - 1) * cp.a1.size() + ell &&
                        check_hamilton_ell_cycle(c.graph, *r.cycle).ok;
        if (! ok && broken++ == 0)
            first_broken = c.name;
    }
    return {successes >= 20 && broken == 0,
            std::to_string(successes) + " successful runs, " + std::to_string(broken) + " identity violations, " + std::to_string(failures) +
                " runs without a cover path" + (first_broken.empty() ? "" : " (first: " + first_broken + ")") + no_cover};
}

Outcome end_to_end()
{
    int runs = 0;
    int agree = 0;
    std::string first_bad;
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const instances::Variant v{12, 5, 3, 1, seed, seed % 3 == 0 ? 40 : 0, static_cast<int>(seed % 4)};
        const auto h = instances::barrier_variant(v);
        PipelineOptions opt;
        opt.seed = seed;
        const auto r = assemble_hamilton_cycle(h, GoodnessParams::desk(5, 3), opt);
        ++runs;
        const bool ok = r.cycle && ! r.used_fallback && check_hamilton_ell_cycle(h, *r.cycle).ok &&
                        find_hamilton_ell_cycle(h, 3).verdict == SearchVerdict::found;
        agree += ok;
        if (! ok && first_bad.empty())
            first_bad = instances::describe(v) + " failed at " + r.failed_stage;
    }
    return {runs >= 10 && agree == runs,
            std::to_string(agree) + "/" + std::to_string(runs) + " pipeline certificates accepted and solver-confirmed" +
                (first_bad.empty() ? "" : " (" + first_bad + ")")};
}

Outcome lll_machinery()
{
    std::mt19937_64 rng(10);
    int mismatches = 0;
    for (int set = 0; set < 1000; ++set) {
        const int m = 5 + static_cast<int>(rng() % 26);
        const int span = 4 + static_cast<int>(rng() % 10);
        std::vector<InjectionEvent> events;
        ConflictGraph g;
        for (int i = 0; i < m; ++i) {
            const int size = 1 + static_cast<int>(rng() % 3);
            InjectionEvent e;
            while (static_cast<int>(e.domain.size()) < size) {
                const int d = static_cast<int>(rng() % static_cast<std::uint64_t>(span));
                const Vertex v = static_cast<Vertex>(rng() % static_cast<std::uint64_t>(span));
                if (std::find(e.domain.begin(), e.domain.end(), d) == e.domain.end() && std::find(e.image.begin(), e.image.end(), v) == e.image.end()) {
                    e.domain.push_back(d);
                    e.image.push_back(v);
                }
            }
            events.push_back(e);
            g.add(e);
        }
        // Two events conflict when they cannot hold together: some domain
        // point goes to different images, or two domain points share one.
        for (int i = 0; i < m; ++i) {
            int deg = 0;
            for (int j = 0; j < m; ++j) {
                if (i == j)
                    continue;
                bool clash = false;
                for (std::size_t a = 0; a < events[i].domain.size(); ++a)
                    for (std::size_t b = 0; b < events[j].domain.size(); ++b)
                        clash |= (events[i].domain[a] == events[j].domain[b]) != (events[i].image[a] == events[j].image[b]);
                deg += clash;
            }
            mismatches += deg != g.degrees()[static_cast<std::size_t>(i)];
        }
    }
    int boundary_errors = 0;
    for (long double d : {0.0L, 1.0L, 10.0L}) {
        const long double p = 1.0L / (std::exp(1.0L) * (d + 1));
        boundary_errors += ! lll_condition(p - kLllOffset, d);
        boundary_errors += lll_condition(p + kLllOffset, d);
        // Exact overload with rational p just inside and outside.
        const long long den = 1000000000000LL;
        const auto below = static_cast<long long>(std::floor((p - kLllOffset) * den));
        const auto above = static_cast<long long>(std::ceil((p + kLllOffset) * den));
        boundary_errors += ! lll_condition(Exact(below, den), exact(static_cast<std::uint64_t>(d)));
        boundary_errors += lll_condition(Exact(above, den), exact(static_cast<std::uint64_t>(d)));
    }
    return {mismatches == 0 && boundary_errors == 0,
            "1000 event sets, " + std::to_string(mismatches) + " degree mismatches; boundary at 1/(e(d+1)) +- 1e-9 for d in {0,1,10}: " +
                std::to_string(boundary_errors) + " errors"};
}

Outcome determinism()
{
    std::vector<ExperimentInput> inputs;
    GeneratorSpec yes{"barrier_plus_slack", 12, 5, 3, 0.5, 1};
    GeneratorSpec seven{"barrier_plus_slack", 16, 7, 5, 0.5, 1};
    GeneratorSpec no{"space_barrier", 12, 5, 3};
    for (unsigned threads : {1U, 4U, 0U})
        for (const auto & spec : {yes, no}) {
            ExperimentInput in{"solve", {{"generator", to_json(spec)}}};
            in.params = {{"ell", spec.ell}, {"threads", threads}};
            inputs.push_back(in);
        }
    for (const char * cmd : {"pipeline", "classify", "census"})
        for (const auto & spec : {yes, seven, no}) {
            ExperimentInput in{cmd, {{"generator", to_json(spec)}}, 7};
            in.params = {{"ell", spec.ell}};
            inputs.push_back(in);
        }
    ExperimentInput t{"turan", nullptr};
    t.params = {{"n", 6}, {"k", 3}, {"r", 2}};
    inputs.push_back(t);

    int mismatches = 0;
    std::map<std::string, nlohmann::json> by_spec;
    for (const auto & in : inputs) {
        const auto r = run_experiment(in);
        const auto stored = record_from_json(nlohmann::json::parse(to_json(r).dump()));
        for (int i = 0; i < 3; ++i) {
            const auto again = run_experiment(input_from_record(stored));
            mismatches += again.verdicts.dump() != stored.verdicts.dump() || again.certificates.dump() != stored.certificates.dump();
        }
        if (in.command == "solve") {
            // Same instance at every thread count must give the same certificate.
            const std::string key = in.instance.dump();
            if (! by_spec.contains(key))
                by_spec[key] = r.certificates;
            mismatches += by_spec[key].dump() != r.certificates.dump();
        }
    }
    // Generators and sweeps are pure too.
    for (int i = 0; i < 3; ++i) {
        GeneratorSpec rnd{"random_uniform", 9, 3, 2, 0.4, 0, 1, 99};
        mismatches += to_json(generate(rnd).graph).dump() != to_json(generate(rnd).graph).dump();
    }
    const auto s1 = to_json(sweep({{12, 5, 3}}, {})[0]).dump();
    for (int i = 0; i < 2; ++i)
        mismatches += to_json(sweep({{12, 5, 3}}, {})[0]).dump() != s1;
    return {mismatches == 0, std::to_string(inputs.size()) + " records x 3 replays (solve at 1, 4 and all threads), generators, sweep: " +
                                 std::to_string(mismatches) + " mismatches"};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"threshold bracket (12,5,3)", [] { return bracket(12, 5, 3, kBracketSecsA); }},
        {"threshold bracket (12,7,5)", [] { return bracket(12, 7, 5, kBracketSecsB); }},
        {"solver vs permutation oracle", solver_vs_permutations},
        {"turan conformance", turan_grid},
        {"path coloring property suite", coloring_suite},
        {"canonical path tiling", tiling_suite},
        {"bad-set census", census_suite},
        {"cover path balance identity", balance_identity},
        {"end-to-end extremal pipeline", end_to_end},
        {"LLL machinery", lll_machinery},
        {"replay determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        }
        catch (const std::exception & e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += ! o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << std::setw(2) << i + 1 << ". " << criteria[i].first << ": " << o.detail << " ["
                  << std::fixed << std::setprecision(2) << since(t0) << "s]" << std::endl;
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
