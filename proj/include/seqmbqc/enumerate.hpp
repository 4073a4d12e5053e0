#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "random.hpp"

namespace seqmbqc {

/// All unordered vertex pairs j < k in lexicographic order; bit i of an
/// edge mask refers to pair i of this list.
inline std::vector<std::pair<int, int>> vertex_pairs(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            pairs.emplace_back(j, k);
    return pairs;
}

inline WeightedGraph unweighted_graph_from_mask(int n, std::uint64_t mask,
                                                std::optional<long long> modulus = std::nullopt) {
    WeightedGraph g(n, modulus);
    auto pairs = vertex_pairs(n);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if ((mask >> i) & 1u)
            g.set_weight(pairs[i].first, pairs[i].second, 1);
    return g;
}

/// (r, m) for every vertex r whose only neighbor is m.
inline std::vector<std::pair<int, int>> degree_one_pairs(const WeightedGraph& g) {
    std::vector<std::pair<int, int>> out;
    for (int r = 0; r < g.size(); ++r) {
        auto nbr = neighborhood(g, r);
        if (nbr.size() == 1)
            out.emplace_back(r, nbr[0]);
    }
    return out;
}

inline WeightedGraph random_unweighted_graph(std::mt19937_64& rng, int n,
                                             std::optional<long long> modulus = std::nullopt,
                                             double edge_prob = 0.5) {
    WeightedGraph g(n, modulus);
    for (auto [j, k] : vertex_pairs(n))
        if (uniform01(rng) < edge_prob)
            g.set_weight(j, k, 1);
    return g;
}

/// Random unweighted graph guaranteed to contain a degree-1 vertex r whose
/// neighbor is m; returns the graph and the (r, m) pair.
struct QualifyingGraph {
    WeightedGraph g;
    int r = 0;
    int m = 0;
};

inline QualifyingGraph random_qualifying_graph(std::mt19937_64& rng, int n,
                                               std::optional<long long> modulus = std::nullopt,
                                               double edge_prob = 0.5) {
    WeightedGraph g = random_unweighted_graph(rng, n, modulus, edge_prob);
    int r = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int m = static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
    if (m >= r)
        ++m;
    for (int k = 0; k < n; ++k)
        if (k != r)
            g.set_weight(r, k, 0);
    g.set_weight(r, m, 1);
    return {g, r, m};
}

/// Small nonzero rational weight p/q with p in [-4, 4] and q in [1, 4].
inline Weight random_rational_weight(std::mt19937_64& rng) {
    long long p = static_cast<long long>(rng() % 8) - 4;
    if (p >= 0)
        ++p;  // skip zero: -4..-1, 1..4
    long long q = static_cast<long long>(rng() % 4) + 1;
    return Weight(p, q);
}

inline WeightedGraph random_weighted_graph(std::mt19937_64& rng, int n, double edge_prob = 0.5) {
    WeightedGraph g(n);
    for (auto [j, k] : vertex_pairs(n))
        if (uniform01(rng) < edge_prob)
            g.set_weight(j, k, random_rational_weight(rng));
    return g;
}

/// Random real-weighted graph prepared for the Gaussian LC check at vertex j:
/// all edges incident to j carry the same weight +1 or -1 (the regime where
/// the pure shear product realizes local complementation); edges elsewhere
/// carry arbitrary rational weights.
struct LcTestCase {
    WeightedGraph g;
    int vertex = 0;
    int sign = 1;
};

inline LcTestCase random_cv_lc_case(std::mt19937_64& rng, int n) {
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    Weight star_weight = (rng() & 1u) ? Weight(1) : Weight(-1);
    WeightedGraph g(n);
    for (auto [a, b] : vertex_pairs(n)) {
        if (uniform01(rng) >= 0.5)
            continue;
        if (a == j || b == j)
            g.set_weight(a, b, star_weight);
        else
            g.set_weight(a, b, random_rational_weight(rng));
    }
    int sign = (rng() & 1u) ? 1 : -1;
    return {g, j, sign};
}

}  // namespace seqmbqc
