// hamcycle: command-line front end for the solvers, generators and the
// extremal pipeline. Exit codes: 0 found/success, 1 definite negative,
// 2 budget exceeded, 3 usage or input error.

#include <hamcycle/experiments.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace hamcycle;
using nlohmann::json;

enum Exit { ok = 0, negative = 1, budget = 2, usage = 3 };

int exit_for(SearchVerdict v)
{
    switch (v) {
    case SearchVerdict::found:
        return ok;
    case SearchVerdict::exhausted_no:
        return negative;
    case SearchVerdict::budget_exceeded:
        break;
    }
    return budget;
}

SearchVerdict verdict_from(const std::string & s)
{
    if (s == "found")
        return SearchVerdict::found;
    if (s == "exhausted-no")
        return SearchVerdict::exhausted_no;
    return SearchVerdict::budget_exceeded;
}

struct Globals {
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> budget_nodes;
    std::optional<double> budget_secs;
    std::string params = "{}";
    std::string format = "json";
    std::string record;
    unsigned threads = 0;

    SearchBudget budget() const { return {budget_nodes, budget_secs}; }

    json params_json() const
    {
        std::string text = params;
        if (! text.empty() && text[0] == '@')
            text = read_file(text.substr(1));
        try {
            json j = json::parse(text);
            if (! j.is_object())
                throw ParseError("--params must be a JSON object");
            return j;
        }
        catch (const json::parse_error & e) {
            throw ParseError(std::string("--params: ") + e.what());
        }
    }
};

void emit(const Globals & g, const json & j, const std::string & text)
{
    if (g.format == "text")
        std::cout << text;
    else
        std::cout << j.dump(2) << '\n';
}

ExperimentRecord run_and_store(const Globals & g, ExperimentInput in)
{
    in.seed = g.seed;
    in.budget = g.budget();
    auto r = run_experiment(in);
    if (! g.record.empty()) {
        std::ofstream out(g.record, std::ios::app);
        if (! out)
            throw ParseError("cannot append to " + g.record);
        append_record(out, r);
    }
    return r;
}

json options_with_ell(const Globals & g, int ell)
{
    json opt = g.params_json();
    if (ell > 0)
        opt["ell"] = ell;
    return opt;
}

} // namespace

int main(int argc, char ** argv)
{
    CLI::App app{"Hamilton ell-cycles in k-uniform hypergraphs"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--budget-nodes", g.budget_nodes, "Node limit for exhaustive searches");
    app.add_option("--budget-secs", g.budget_secs, "Time limit in seconds");
    app.add_option("--params", g.params, "Parameters as a JSON object, or @file");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    app.add_option("--record", g.record, "Append an experiment record to this JSONL store");
    app.add_option("--threads", g.threads, "Solver threads (0 = hardware concurrency)")->capture_default_str();

    // gen
    auto * gen = app.add_subcommand("gen", "Generate an instance");
    GeneratorSpec spec;
    std::string out_path;
    std::string manifest_path;
    std::string out_format = "edges";
    gen->add_option("--family", spec.family, "complete, space_barrier, barrier_plus_slack, random_uniform, kpartite_random")->required();
    gen->add_option("-n,--n", spec.n);
    gen->add_option("-k,--k", spec.k);
    gen->add_option("--ell", spec.ell);
    gen->add_option("--p", spec.p);
    gen->add_option("--slack", spec.slack);
    gen->add_option("--m", spec.m);
    gen->add_option("-o,--out", out_path, "Instance file (default stdout)");
    gen->add_option("--manifest", manifest_path, "Write the manifest here");
    gen->add_option("--as", out_format, "Instance format")->check(CLI::IsMember({"edges", "json"}));

    // solve
    auto * solve = app.add_subcommand("solve", "Exhaustive Hamilton ell-cycle search");
    std::string graph_path;
    int ell = 0;
    solve->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    solve->add_option("--ell", ell)->required();

    // verify
    auto * verify = app.add_subcommand("verify", "Check a cycle certificate");
    std::string cycle_path;
    verify->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
    verify->add_option("cycle", cycle_path, "JSON {k, ell, vertices}, or an object with a cycle field")->required()->check(CLI::ExistingFile);

    // classify, pipeline, census share inputs
    auto * classify_cmd = app.add_subcommand("classify", "Extremal partition and the A', B', V0 split");
    auto * pipeline = app.add_subcommand("pipeline", "Run the extremal-case construction stage by stage");
    auto * census_cmd = app.add_subcommand("census", "Bad-set counts against their bounds");
    for (auto * sub : {classify_cmd, pipeline, census_cmd}) {
        sub->add_option("graph", graph_path)->required()->check(CLI::ExistingFile);
        sub->add_option("--ell", ell, "Overrides ell in --params");
    }

    // turan
    auto * turan = app.add_subcommand("turan", "Exact Turan numbers by exhaustive search");
    int tn = 0;
    int tk = 0;
    int tr = 0;
    turan->add_option("-n,--n", tn)->required();
    turan->add_option("-k,--k", tk)->required();
    turan->add_option("-r,--r", tr)->required();

    // sweep
    auto * sweep_cmd = app.add_subcommand("sweep", "Bracket the co-degree threshold on a grid");
    std::vector<std::string> cells;
    std::string mode = "exact";
    sweep_cmd->add_option("--cell", cells, "n,k,ell (repeatable)")->required();
    sweep_cmd->add_option("--mode", mode)->check(CLI::IsMember({"exact", "pipeline"}));

    // report
    auto * report = app.add_subcommand("report", "Summarise a JSONL record store");
    std::string store_path;
    bool replay = false;
    report->add_option("store", store_path)->required()->check(CLI::ExistingFile);
    report->add_flag("--replay", replay, "Re-run every record and compare verdicts and certificates");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*gen) {
            if (app.count("--seed"))
                spec.seed = g.seed;
            const auto inst = generate(spec);
            const std::string body = out_format == "json" ? to_json(inst.graph).dump() + "\n" : to_edge_list(inst.graph);
            if (out_path.empty())
                std::cout << body;
            else
                write_file(out_path, body);
            if (! manifest_path.empty()) {
                json m = {{"spec", to_json(spec)},
                          {"seed", spec.seed ? json(*spec.seed) : json(nullptr)},
                          {"min_codegree", inst.min_codegree},
                          {"edges", inst.graph.edge_count()},
                          {"version", kToolVersion}};
                if (inst.certificate)
                    m["certificate"] = to_json(*inst.certificate);
                write_file(manifest_path, m.dump(2) + "\n");
            }
            return ok;
        }
        if (*solve) {
            ExperimentInput in{"solve", {{"graph", to_json(load_hypergraph(graph_path))}}};
            in.params = {{"ell", ell}, {"threads", g.threads}};
            const auto r = run_and_store(g, in);
            const auto v = r.verdicts["solve"].get<std::string>();
            emit(g, r.certificates, v + "\n");
            return exit_for(verdict_from(v));
        }
        if (*verify) {
            const Hypergraph h = load_hypergraph(graph_path);
            json j = json::parse(read_file(cycle_path));
            if (j.contains("cycle"))
                j = j["cycle"];
            if (j.is_null())
                throw ParseError("certificate has no cycle");
            const auto verdict = check_hamilton_ell_cycle(h, cycle_from_json(j));
            emit(g, to_json(verdict), verdict.ok ? "accepted\n" : std::string("rejected: ") + to_string(verdict.reason) + "\n");
            return verdict.ok ? ok : negative;
        }
        if (*classify_cmd || *census_cmd) {
            const std::string cmd = *classify_cmd ? "classify" : "census";
            ExperimentInput in{cmd, {{"graph", to_json(load_hypergraph(graph_path))}}};
            in.params = options_with_ell(g, ell);
            const auto r = run_and_store(g, in);
            std::string text;
            if (cmd == "classify") {
                const auto & c = r.certificates["classification"];
                text = "A' = " + c["A_prime"].dump() + "\nB' = " + c["B_prime"].dump() + "\nV0 = " + c["V0"].dump() +
                       "\nextremal = " + r.verdicts["extremal"].dump() + "\n";
            }
            else {
                text = "sparse_b = " + r.verdicts["sparse_b"].dump() + "\n";
                for (const auto & row : r.certificates["census"]["rows"])
                    text += row.dump() + "\n";
                text += "all pass = " + r.verdicts["census"].dump() + "\n";
            }
            emit(g, {{"verdicts", r.verdicts}, {"certificates", r.certificates}}, text);
            if (cmd == "census")
                return r.verdicts["census"].get<bool>() ? ok : negative;
            return ok;
        }
        if (*pipeline) {
            ExperimentInput in{"pipeline", {{"graph", to_json(load_hypergraph(graph_path))}}};
            in.params = options_with_ell(g, ell);
            const auto r = run_and_store(g, in);
            const auto & trace = r.certificates;
            if (g.format == "text") {
                for (const auto & s : trace["stages"])
                    std::cout << s["stage"].get<std::string>() << ": " << s["status"].get<std::string>() << "\n";
                std::cout << "verdict: " << trace["verdict"].get<std::string>() << "\n";
            }
            else {
                for (const auto & s : trace["stages"])
                    std::cout << json{{"stage", s["stage"]}, {"inputs_hash", r.spec_hash}, {"seed", r.seed}, {"status", s["status"]},
                                      {"certificate", s["detail"]}}
                                     .dump()
                              << '\n';
                std::cout << json{{"stage", "result"},
                                  {"inputs_hash", r.spec_hash},
                                  {"verdict", trace["verdict"]},
                                  {"failed_stage", trace["failed_stage"]},
                                  {"cycle", trace["cycle"]}}
                                 .dump()
                          << '\n';
            }
            return exit_for(verdict_from(trace["verdict"].get<std::string>()));
        }
        if (*turan) {
            ExperimentInput in{"turan", nullptr};
            in.params = {{"n", tn}, {"k", tk}, {"r", tr}};
            const auto r = run_and_store(g, in);
            const auto v = r.verdicts["turan"].get<std::string>();
            emit(g, {{"verdicts", r.verdicts}, {"certificates", r.certificates}},
                 "ex = " + r.certificates["value"].dump() + " (bound " + r.certificates["bound"].get<std::string>() + ", " + v + ")\n");
            return v == "budget-exceeded" ? budget : ok;
        }
        if (*sweep_cmd) {
            std::vector<std::array<int, 3>> grid;
            for (const auto & c : cells) {
                std::array<int, 3> t{};
                char c1 = 0;
                char c2 = 0;
                std::istringstream is(c);
                if (! (is >> t[0] >> c1 >> t[1] >> c2 >> t[2]) || c1 != ',' || c2 != ',')
                    throw ParseError("bad --cell " + c + " (want n,k,ell)");
                grid.push_back(t);
            }
            const auto res = sweep(grid, g.budget(), mode, g.threads);
            json j = json::array();
            for (const auto & c : res)
                j.push_back(to_json(c));
            if (g.format == "csv")
                std::cout << sweep_csv(res);
            else
                emit(g, j, sweep_csv(res));
            for (const auto & c : res)
                if (c.status == "budget-exceeded")
                    return budget;
            return ok;
        }
        if (*report) {
            std::ifstream in(store_path);
            const auto s = summarize_records(in);
            for (const auto & w : s.warnings)
                std::cerr << "warning: " << w << '\n';
            json out = s.summary;
            bool replay_ok = true;
            if (replay) {
                std::ifstream again(store_path);
                std::string line;
                json mismatches = json::array();
                while (std::getline(again, line)) {
                    try {
                        const auto r = record_from_json(json::parse(line));
                        std::string why;
                        if (! replay_matches(r, &why))
                            mismatches.push_back({{"spec_hash", r.spec_hash}, {"reason", why}});
                    }
                    catch (const std::exception &) {
                        // already counted as corrupt
                    }
                }
                replay_ok = mismatches.empty();
                out["replay_mismatches"] = mismatches;
            }
            emit(g, out, summary_text(s) + (replay ? (replay_ok ? "replay: identical\n" : "replay: MISMATCH\n") : ""));
            return s.corrupt > 0 || ! replay_ok ? negative : ok;
        }
    }
    catch (const InvalidArgument & e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    catch (const ParseError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    catch (const json::exception & e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    }
    return usage;
}
