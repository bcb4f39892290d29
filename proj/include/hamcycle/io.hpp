#ifndef HAMCYCLE_IO_HPP
#define HAMCYCLE_IO_HPP

#include <hamcycle/hypergraph.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace hamcycle {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Edge-list text: "n k" on the first line, then one edge per line,
/// vertices ascending, edges in lexicographic order.
inline std::string to_edge_list(const Hypergraph & h)
{
    std::ostringstream out;
    out << h.n() << ' ' << h.k() << '\n';
    for (VertexSet e : h.edges()) {
        bool first = true;
        e.for_each([&](Vertex v) {
            out << (first ? "" : " ") << v;
            first = false;
        });
        out << '\n';
    }
    return out.str();
}

inline Hypergraph from_edge_list(const std::string & text)
{
    std::istringstream in(text);
    std::string line;
    int n = -1;
    int k = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ls(line);
        if (! (ls >> n >> k))
            throw ParseError("line " + std::to_string(lineno) + ": expected header \"n k\"");
        break;
    }
    if (n < 0)
        throw ParseError("missing header line");
    Hypergraph h(n, k);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::istringstream ls(line);
        std::vector<Vertex> vs;
        Vertex v = 0;
        while (ls >> v)
            vs.push_back(v);
        if (! ls.eof())
            throw ParseError("line " + std::to_string(lineno) + ": non-numeric token");
        try {
            const VertexSet e = VertexSet::from(vs);
            if (e.size() != static_cast<int>(vs.size()))
                throw InvalidArgument("repeated vertex");
            if (! h.add_edge(e))
                throw InvalidArgument("duplicate edge");
        }
        catch (const InvalidArgument & err) {
            throw ParseError("line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    return h;
}

inline nlohmann::json to_json(const Hypergraph & h)
{
    nlohmann::json edges = nlohmann::json::array();
    for (VertexSet e : h.edges())
        edges.push_back(e.members());
    return {{"n", h.n()}, {"k", h.k()}, {"edges", edges}};
}

inline Hypergraph hypergraph_from_json(const nlohmann::json & j)
{
    try {
        const int n = j.at("n").get<int>();
        const int k = j.at("k").get<int>();
        return make_hypergraph(n, k, j.at("edges").get<std::vector<std::vector<Vertex>>>());
    }
    catch (const nlohmann::json::exception & err) {
        throw ParseError(std::string("malformed hypergraph JSON: ") + err.what());
    }
}

inline std::string read_file(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (! in)
        throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string & path, const std::string & contents)
{
    std::ofstream out(path, std::ios::binary);
    if (! out)
        throw ParseError("cannot write " + path);
    out << contents;
}

/// Accepts either format; JSON is recognised by a leading '{'.
inline Hypergraph parse_hypergraph(const std::string & text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        }
        catch (const nlohmann::json::parse_error & err) {
            throw ParseError(err.what());
        }
        return hypergraph_from_json(j);
    }
    return from_edge_list(text);
}

inline Hypergraph load_hypergraph(const std::string & path) { return parse_hypergraph(read_file(path)); }

} // namespace hamcycle

#endif // HAMCYCLE_IO_HPP
