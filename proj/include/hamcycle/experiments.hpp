#ifndef HAMCYCLE_EXPERIMENTS_HPP
#define HAMCYCLE_EXPERIMENTS_HPP

#include <hamcycle/constructions.hpp>
#include <hamcycle/extremal.hpp>
#include <hamcycle/io.hpp>
#include <hamcycle/search.hpp>

#include <json.hpp>

#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace hamcycle {

inline constexpr const char * kToolVersion = "0.3.0";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string fraction_string(const Rational & q)
{
    if (q.denominator() == 1)
        return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline nlohmann::json to_json(const SearchBudget & b)
{
    nlohmann::json j = nlohmann::json::object();
    j["nodes"] = b.node_limit ? nlohmann::json(*b.node_limit) : nlohmann::json(nullptr);
    j["seconds"] = b.time_limit ? nlohmann::json(*b.time_limit) : nlohmann::json(nullptr);
    return j;
}

inline SearchBudget budget_from_json(const nlohmann::json & j)
{
    SearchBudget b;
    if (j.contains("nodes") && ! j["nodes"].is_null())
        b.node_limit = j["nodes"].get<std::uint64_t>();
    if (j.contains("seconds") && ! j["seconds"].is_null())
        b.time_limit = j["seconds"].get<double>();
    b.validate();
    return b;
}

/// One line of the record store.
struct ExperimentRecord {
    std::string spec_hash;
    std::uint64_t seed = 0;
    std::string command;
    nlohmann::json params;
    nlohmann::json verdicts;
    nlohmann::json certificates;
    double wall_time = 0;
    std::string version = kToolVersion;
};

inline nlohmann::json to_json(const ExperimentRecord & r)
{
    return {{"spec_hash", r.spec_hash},
            {"seed", r.seed},
            {"command", r.command},
            {"params", r.params},
            {"verdicts", r.verdicts},
            {"certificates", r.certificates},
            {"wall_time", r.wall_time},
            {"version", r.version}};
}

inline ExperimentRecord record_from_json(const nlohmann::json & j)
{
    if (! j.is_object())
        throw InvalidArgument("record is not an object");
    for (const char * key : {"spec_hash", "seed", "command", "params", "verdicts", "certificates", "wall_time", "version"})
        if (! j.contains(key))
            throw InvalidArgument(std::string("record lacks ") + key);
    try {
        return {j["spec_hash"].get<std::string>(), j["seed"].get<std::uint64_t>(), j["command"].get<std::string>(), j["params"],
                j["verdicts"],                     j["certificates"],              j["wall_time"].get<double>(), j["version"].get<std::string>()};
    }
    catch (const nlohmann::json::exception & e) {
        throw InvalidArgument(std::string("malformed record: ") + e.what());
    }
}

/// Everything needed to run (and re-run) one command.
struct ExperimentInput {
    std::string command; // solve, pipeline, classify, census, turan
    /// {"generator": {...}} or {"graph": {...}}; null for turan.
    nlohmann::json instance;
    std::uint64_t seed = 0;
    /// ell, goodness parameters, turan sizes, solver threads.
    nlohmann::json params = nlohmann::json::object();
    SearchBudget budget;
};

inline nlohmann::json stored_params(const ExperimentInput & in)
{
    return {{"instance", in.instance}, {"options", in.params}, {"budget", to_json(in.budget)}};
}

inline ExperimentInput input_from_record(const ExperimentRecord & r)
{
    ExperimentInput in;
    in.command = r.command;
    in.seed = r.seed;
    in.instance = r.params.value("instance", nlohmann::json(nullptr));
    in.params = r.params.value("options", nlohmann::json::object());
    in.budget = budget_from_json(r.params.value("budget", nlohmann::json::object()));
    return in;
}

inline Hypergraph instance_graph(const nlohmann::json & instance)
{
    if (instance.is_object() && instance.contains("generator"))
        return generate(generator_spec_from_json(instance["generator"])).graph;
    if (instance.is_object() && instance.contains("graph"))
        return hypergraph_from_json(instance["graph"]);
    throw InvalidArgument("instance needs a generator spec or an inline graph");
}

inline GoodnessParams goodness_for(const nlohmann::json & options, int k)
{
    const int ell = options.value("ell", -1);
    if (ell < 1)
        throw InvalidArgument("ell is required");
    return goodness_params_from_json(options.value("goodness", nlohmann::json::object()), k, ell);
}

/// Census, classification implications and the good-set degree check on the
/// minimum-e(B) partition.
inline nlohmann::json census_json(const Hypergraph & h, const GoodnessParams & params, std::uint64_t seed)
{
    MinimizeOptions mopt;
    mopt.seed = seed;
    const auto p = minimize_eB(h, params, mopt);
    const auto c = classify(h, p, params);
    const GoodnessOracle oracle(h, p.b, params);
    const auto cen = census(h, p.b, params, {params.eps1, params.eps1 * params.eps1 / Exact(3), params.eps2});
    return {{"partition", to_json(p)},
            {"census", to_json(cen)},
            {"classification", to_json(c)},
            {"implications", to_json(classification_report(h, p, c, params))},
            {"good_set_degrees", to_json(good_set_degree_report(h, c, oracle))}};
}

/// Runs the command. Verdicts and certificates are deterministic given the
/// input; only the wall time varies between runs.
inline ExperimentRecord run_experiment(const ExperimentInput & in)
{
    in.budget.validate();
    ExperimentRecord r;
    r.command = in.command;
    r.seed = in.seed;
    r.params = stored_params(in);
    r.spec_hash = hex64(fnv1a(in.command + "|" + in.instance.dump() + "|" + in.params.dump()));
    const auto t0 = detail::Clock::now();
    if (in.command == "turan") {
        const int n = in.params.value("n", 0);
        const int k = in.params.value("k", 0);
        const int rr = in.params.value("r", 0);
        const auto res = turan_bruteforce(n, k, rr, in.budget);
        const Rational bound = turan_bound(n, k, rr);
        r.verdicts = {{"turan", to_string(res.verdict)},
                      {"within_bound", Rational(static_cast<long long>(res.value)) <= bound}};
        nlohmann::json witness = nlohmann::json::array();
        for (VertexSet e : res.witness)
            witness.push_back(e.members());
        r.certificates = {{"value", res.value},
                          {"bound", fraction_string(bound)},
                          {"witness", witness},
                          {"nodes", res.nodes}};
    }
    else {
        const Hypergraph h = instance_graph(in.instance);
        if (in.command == "solve") {
            const int ell = in.params.value("ell", -1);
            if (ell < 1 || ell >= h.k())
                throw InvalidArgument("solve needs 1 <= ell < k");
            SolverOptions sopt;
            sopt.threads = in.params.value("threads", 1U);
            const auto out = find_hamilton_ell_cycle(h, ell, in.budget, sopt);
            r.verdicts = {{"solve", to_string(out.verdict)}};
            r.certificates = to_json(out);
            if (out.cycle)
                r.certificates["checker"] = to_json(check_hamilton_ell_cycle(h, *out.cycle));
        }
        else if (in.command == "pipeline") {
            const auto params = goodness_for(in.params, h.k());
            PipelineOptions opt;
            opt.seed = in.seed;
            opt.partition.seed = in.seed;
            if (in.budget.node_limit || in.budget.time_limit) {
                opt.fallback_budget = in.budget;
                opt.steps.budget = in.budget;
                opt.completion.budget = in.budget;
            }
            opt.require_extremal = in.params.value("require_extremal", true);
            const auto out = assemble_hamilton_cycle(h, params, opt);
            r.verdicts = {{"pipeline", to_string(out.verdict)}, {"failed_stage", out.failed_stage}};
            r.certificates = to_json(out);
        }
        else if (in.command == "classify") {
            const auto params = goodness_for(in.params, h.k());
            MinimizeOptions mopt;
            mopt.seed = in.seed;
            const auto ext = is_delta_extremal(h, params, mopt);
            const auto c = classify(h, ext.witness, params);
            r.verdicts = {{"extremal", ext.extremal}, {"q", c.q}};
            r.certificates = {{"extremality", to_json(ext)}, {"classification", to_json(c)}};
        }
        else if (in.command == "census") {
            const auto params = goodness_for(in.params, h.k());
            r.certificates = census_json(h, params, in.seed);
            r.verdicts = {{"census", r.certificates["census"]["all_pass"]}, {"sparse_b", r.certificates["census"]["sparse_b"]}};
        }
        else
            throw InvalidArgument("unknown command " + in.command);
    }
    r.wall_time = detail::seconds_since(t0);
    return r;
}

/// Re-runs the record's input and compares verdicts and certificates.
inline bool replay_matches(const ExperimentRecord & r, std::string * why = nullptr)
{
    const auto again = run_experiment(input_from_record(r));
    if (again.verdicts != r.verdicts) {
        if (why)
            *why = "verdicts differ: " + again.verdicts.dump();
        return false;
    }
    if (again.certificates != r.certificates) {
        if (why)
            *why = "certificates differ";
        return false;
    }
    return true;
}

/// Appends one JSON line.
inline void append_record(std::ostream & out, const ExperimentRecord & r) { out << to_json(r).dump() << '\n'; }

// ---------------------------------------------------------------------------
// Threshold sweep

struct SweepRow {
    std::string family;
    std::uint64_t min_codegree = 0;
    SearchVerdict verdict = SearchVerdict::exhausted_no;
    std::optional<std::string> pipeline; // pipeline verdict in pipeline mode
};

struct SweepCell {
    int n = 0;
    int k = 0;
    int ell = 0;
    std::string status = "ok"; // ok, not-applicable, budget-exceeded
    std::string reason;
    std::string threshold; // n/(s(k-ell)) as a reduced fraction
    std::vector<SweepRow> rows;
};

inline const char * hamiltonicity(SearchVerdict v)
{
    switch (v) {
    case SearchVerdict::found:
        return "yes";
    case SearchVerdict::exhausted_no:
        return "no";
    case SearchVerdict::budget_exceeded:
        break;
    }
    return "unknown";
}

inline nlohmann::json to_json(const SweepCell & c)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto & r : c.rows) {
        nlohmann::json row = {{"family", r.family},
                              {"min_codegree", r.min_codegree},
                              {"verdict", to_string(r.verdict)},
                              {"hamiltonian", hamiltonicity(r.verdict)}};
        if (r.pipeline)
            row["pipeline"] = *r.pipeline;
        rows.push_back(row);
    }
    return {{"n", c.n}, {"k", c.k}, {"ell", c.ell}, {"status", c.status}, {"reason", c.reason}, {"threshold", c.threshold}, {"rows", rows}};
}

namespace detail {

    inline SweepCell sweep_cell(int n, int k, int ell, const SearchBudget & budget, const std::string & mode)
    {
        SweepCell cell{n, k, ell};
        if (k < 2 || ell < 1 || ell >= k) {
            cell.status = "not-applicable";
            cell.reason = "needs 1 <= ell < k";
            return cell;
        }
        cell.threshold = fraction_string(codegree_threshold(n, k, ell));
        if (n % (k - ell) != 0) {
            cell.status = "not-applicable";
            cell.reason = "(k - ell) does not divide n";
            return cell;
        }
        try {
            for (int extra : {0, 1}) {
                const auto b = barrier_plus_slack(n, k, ell, extra);
                SweepRow row{extra == 0 ? "space_barrier" : "barrier_plus_slack", b.min_codegree};
                row.verdict = find_hamilton_ell_cycle(b.graph, ell, budget, {1, 2}).verdict;
                if (mode == "pipeline") {
                    PipelineOptions opt;
                    opt.fallback_budget = budget;
                    try {
                        row.pipeline = to_string(assemble_hamilton_cycle(b.graph, GoodnessParams::desk(k, ell), opt).verdict);
                    }
                    catch (const InvalidArgument &) {
                        row.pipeline = "not-applicable";
                    }
                }
                if (row.verdict == SearchVerdict::budget_exceeded)
                    cell.status = "budget-exceeded";
                cell.rows.push_back(row);
            }
        }
        catch (const InvalidArgument & e) {
            cell.status = "not-applicable";
            cell.reason = e.what();
            cell.rows.clear();
        }
        return cell;
    }

} // namespace detail

/// For every (n, k, ell): the space barrier (one below the threshold) and the
/// barrier with one extra core vertex, each solved exactly. Cells outside the
/// construction's range are not-applicable; a budget hit marks the cell.
/// Cells run concurrently, at most `workers` at a time (0 = hardware
/// concurrency); the output keeps grid order.
inline std::vector<SweepCell> sweep(const std::vector<std::array<int, 3>> & grid, const SearchBudget & budget, const std::string & mode = "exact",
                                    unsigned workers = 0)
{
    if (mode != "exact" && mode != "pipeline")
        throw InvalidArgument("sweep mode must be exact or pipeline");
    budget.validate();
    std::vector<SweepCell> out(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1))
            out[i] = detail::sweep_cell(grid[i][0], grid[i][1], grid[i][2], budget, mode);
    };
    if (workers == 0)
        workers = std::max(1U, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, grid.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto & t : pool)
        t.join();
    return out;
}

inline std::string sweep_csv(const std::vector<SweepCell> & cells)
{
    std::ostringstream os;
    os << "n,k,ell,threshold,status,family,min_codegree,verdict,hamiltonian\n";
    for (const auto & c : cells) {
        if (c.rows.empty())
            os << c.n << ',' << c.k << ',' << c.ell << ',' << c.threshold << ',' << c.status << ",,,,\n";
        for (const auto & r : c.rows)
            os << c.n << ',' << c.k << ',' << c.ell << ',' << c.threshold << ',' << c.status << ',' << r.family << ',' << r.min_codegree
               << ',' << to_string(r.verdict) << ',' << hamiltonicity(r.verdict) << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Report over a record store

struct StoreSummary {
    nlohmann::json summary;
    int corrupt = 0;
    std::vector<std::string> warnings;
};

/// Aggregates a JSONL store. Corrupt lines are skipped and reported.
inline StoreSummary summarize_records(std::istream & in)
{
    StoreSummary out;
    std::map<std::string, std::map<std::string, int>> verdicts;
    std::map<std::string, int> counts;
    std::map<std::string, double> times;
    nlohmann::json entries = nlohmann::json::array();
    int total = 0;
    int found = 0;
    int certified = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        ExperimentRecord r;
        try {
            r = record_from_json(nlohmann::json::parse(line));
        }
        catch (const std::exception & e) {
            ++out.corrupt;
            out.warnings.push_back("line " + std::to_string(line_no) + ": " + e.what());
            continue;
        }
        ++total;
        ++counts[r.command];
        times[r.command] += r.wall_time;
        for (const auto & [key, value] : r.verdicts.items()) {
            const std::string v = value.is_string() ? value.get<std::string>() : value.dump();
            ++verdicts[r.command][key + "=" + v];
            if (v == "found" || v == "true")
                ++found;
        }
        if (r.certificates.is_object() && r.certificates.contains("cycle") && ! r.certificates["cycle"].is_null())
            ++certified;
        entries.push_back({{"spec_hash", r.spec_hash}, {"seed", r.seed}, {"command", r.command}, {"verdicts", r.verdicts}});
    }
    nlohmann::json by_command = nlohmann::json::object();
    for (const auto & [cmd, n] : counts)
        by_command[cmd] = {{"count", n}, {"verdicts", verdicts[cmd]}, {"wall_time_total", times[cmd]}};
    out.summary = {{"records", total},
                   {"corrupt", out.corrupt},
                   {"by_command", by_command},
                   {"positive_verdicts", found},
                   {"cycle_certificates", certified},
                   {"entries", entries}};
    return out;
}

inline std::string summary_text(const StoreSummary & s)
{
    std::ostringstream os;
    os << "records: " << s.summary["records"].get<int>() << "\n";
    os << "corrupt lines: " << s.corrupt << "\n";
    for (const auto & [cmd, info] : s.summary["by_command"].items()) {
        os << cmd << ": " << info["count"].get<int>() << " runs\n";
        for (const auto & [v, n] : info["verdicts"].items())
            os << "  " << v << ": " << n.get<int>() << "\n";
    }
    os << "cycle certificates: " << s.summary["cycle_certificates"].get<int>() << "\n";
    return os.str();
}

} // namespace hamcycle

#endif // HAMCYCLE_EXPERIMENTS_HPP
