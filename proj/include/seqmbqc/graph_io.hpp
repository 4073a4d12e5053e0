#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "graph.hpp"

namespace seqmbqc {

// Graph file format: {"n": <int>, "modulus": <int or null>,
//                     "edges": [[j, k, w], ...]} with j < k and w either an
// integer or a "p/q" string. Unlisted pairs have weight zero; listing a pair
// twice is an error.

inline Weight parse_weight(const nlohmann::json& v) {
    if (v.is_number_integer())
        return Weight(v.get<long long>());
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos)
                return Weight(std::stoll(s));
            long long num = std::stoll(s.substr(0, slash));
            long long den = std::stoll(s.substr(slash + 1));
            if (den == 0)
                throw std::invalid_argument("zero denominator");
            return Weight(num, den);
        } catch (const std::exception&) {
            throw std::invalid_argument("graph file: cannot parse weight '" + s + "'");
        }
    }
    throw std::invalid_argument("graph file: weight must be an integer or a 'p/q' string");
}

inline nlohmann::json weight_to_json(const Weight& w) {
    if (w.denominator() == 1)
        return nlohmann::json(w.numerator());
    std::ostringstream os;
    os << w.numerator() << '/' << w.denominator();
    return nlohmann::json(os.str());
}

inline WeightedGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        throw std::invalid_argument("graph file: expected an object with integer field 'n'");
    std::optional<long long> modulus;
    if (j.contains("modulus") && !j["modulus"].is_null()) {
        if (!j["modulus"].is_number_integer())
            throw std::invalid_argument("graph file: 'modulus' must be an integer or null");
        modulus = j["modulus"].get<long long>();
    }
    WeightedGraph g(j["n"].get<int>(), modulus);
    if (!j.contains("edges"))
        return g;
    if (!j["edges"].is_array())
        throw std::invalid_argument("graph file: 'edges' must be an array");
    std::set<std::pair<int, int>> seen;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw std::invalid_argument("graph file: each edge must be [j, k, w]");
        int a = e[0].get<int>();
        int b = e[1].get<int>();
        if (a >= b)
            throw std::invalid_argument("graph file: edges must satisfy j < k");
        if (!seen.insert({a, b}).second)
            throw std::invalid_argument("graph file: duplicate edge");
        g.set_weight(a, b, parse_weight(e[2]));  // validates range and modulus
    }
    return g;
}

inline nlohmann::json graph_to_json(const WeightedGraph& g) {
    nlohmann::json j;
    j["n"] = g.size();
    j["modulus"] = g.modulus() ? nlohmann::json(*g.modulus()) : nlohmann::json(nullptr);
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b, w] : edge_list(g))
        j["edges"].push_back({a, b, weight_to_json(w)});
    return j;
}

inline WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open graph file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("graph file " + path + ": " + e.what());
    }
    return graph_from_json(j);
}

inline void save_graph(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write graph file: " + path);
    out << graph_to_json(g).dump(2) << '\n';
}

}  // namespace seqmbqc
