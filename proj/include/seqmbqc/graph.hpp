#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace seqmbqc {

/// Exact edge weight. Integer-weighted graphs use denominator 1.
using Weight = boost::rational<long long>;

/// Symmetric weighted adjacency matrix with exact rational entries, zero
/// diagonal, and an optional modulus. With modulus d every weight is an
/// integer reduced into [0, d); without one weights are arbitrary rationals
/// (the continuous-variable case). No floating point enters this type.
class WeightedGraph {
public:
    explicit WeightedGraph(int n, std::optional<long long> modulus = std::nullopt)
        : n_(n), modulus_(modulus), w_(static_cast<std::size_t>(n) * n, Weight(0)) {
        if (n < 1)
            throw std::invalid_argument("WeightedGraph: vertex count must be >= 1");
        if (modulus_ && *modulus_ < 1)
            throw std::invalid_argument("WeightedGraph: modulus must be a positive integer");
    }

    int size() const { return n_; }
    const std::optional<long long>& modulus() const { return modulus_; }

    Weight weight(int j, int k) const {
        check_vertex(j);
        check_vertex(k);
        return w_[idx(j, k)];
    }

    /// Sets the weight of the unordered pair {j,k}; reduces mod d if set.
    void set_weight(int j, int k, const Weight& w) {
        check_vertex(j);
        check_vertex(k);
        if (j == k)
            throw std::invalid_argument("WeightedGraph: self-loops are not allowed");
        Weight r = reduce(w);
        w_[idx(j, k)] = r;
        w_[idx(k, j)] = r;
    }

    void add_weight(int j, int k, const Weight& delta) {
        set_weight(j, k, w_[idx(j, k)] + delta);
    }

    bool operator==(const WeightedGraph& o) const {
        return n_ == o.n_ && modulus_ == o.modulus_ && w_ == o.w_;
    }

private:
    std::size_t idx(int j, int k) const {
        return static_cast<std::size_t>(j) * n_ + k;
    }

    void check_vertex(int v) const {
        if (v < 0 || v >= n_)
            throw std::out_of_range("WeightedGraph: vertex index out of range");
    }

    Weight reduce(const Weight& w) const {
        if (!modulus_)
            return w;
        if (w.denominator() != 1)
            throw std::invalid_argument("WeightedGraph: modulus graphs require integer weights");
        long long d = *modulus_;
        long long r = w.numerator() % d;
        if (r < 0)
            r += d;
        return Weight(r);
    }

    int n_;
    std::optional<long long> modulus_;
    std::vector<Weight> w_;  // row-major n x n; symmetric, zero diagonal
};

/// Parameters of one local complementation: vertex l and additive weight δ.
struct LcParams {
    int vertex;
    Weight delta;
};

/// N_l: all vertices joined to l by a nonzero-weight edge, ascending.
inline std::vector<int> neighborhood(const WeightedGraph& g, int l) {
    if (l < 0 || l >= g.size())
        throw std::out_of_range("neighborhood: vertex index out of range");
    std::vector<int> nb;
    for (int k = 0; k < g.size(); ++k)
        if (k != l && g.weight(l, k) != Weight(0))
            nb.push_back(k);
    return nb;
}

/// LC(l, δ): adds δ once to every unordered pair of distinct neighbors of l.
/// All other entries, including the edges incident to l, are untouched.
inline WeightedGraph local_complement(const WeightedGraph& g, int l, const Weight& delta) {
    std::vector<int> nb = neighborhood(g, l);  // validates l
    WeightedGraph out = g;
    for (std::size_t a = 0; a < nb.size(); ++a)
        for (std::size_t b = a + 1; b < nb.size(); ++b)
            out.add_weight(nb[a], nb[b], delta);
    return out;
}

inline WeightedGraph local_complement(const WeightedGraph& g, const LcParams& p) {
    return local_complement(g, p.vertex, p.delta);
}

/// True iff every nonzero weight equals 1.
inline bool is_unweighted(const WeightedGraph& g) {
    for (int j = 0; j < g.size(); ++j)
        for (int k = j + 1; k < g.size(); ++k) {
            Weight w = g.weight(j, k);
            if (w != Weight(0) && w != Weight(1))
                return false;
        }
    return true;
}

/// LC(m,+1) then LC(r,-1). For an unweighted graph in which r's only
/// neighbor is m this exchanges the two vertices.
inline WeightedGraph swap_by_lc(const WeightedGraph& g, int m, int r) {
    std::vector<int> nr = neighborhood(g, r);
    if (m < 0 || m >= g.size())
        throw std::out_of_range("swap_by_lc: vertex index out of range");
    if (!is_unweighted(g))
        throw std::invalid_argument("swap_by_lc: graph is not unweighted");
    if (nr.size() != 1)
        throw std::invalid_argument("swap_by_lc: r must have exactly one neighbor");
    if (nr[0] != m)
        throw std::invalid_argument("swap_by_lc: r's neighbor is not m");
    return local_complement(local_complement(g, m, Weight(1)), r, Weight(-1));
}

/// Relabels vertices: weights'[pi[j]][pi[k]] = weights[j][k].
inline WeightedGraph permute(const WeightedGraph& g, const std::vector<int>& pi) {
    int n = g.size();
    if (static_cast<int>(pi.size()) != n)
        throw std::invalid_argument("permute: map size does not match vertex count");
    std::vector<bool> seen(n, false);
    for (int v : pi) {
        if (v < 0 || v >= n || seen[v])
            throw std::invalid_argument("permute: map is not a bijection");
        seen[v] = true;
    }
    WeightedGraph out(n, g.modulus());
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            Weight w = g.weight(j, k);
            if (w != Weight(0))
                out.set_weight(pi[j], pi[k], w);
        }
    return out;
}

/// The transposition m <-> r as a permutation map.
inline std::vector<int> transposition(int n, int m, int r) {
    std::vector<int> pi(n);
    for (int i = 0; i < n; ++i)
        pi[i] = i;
    std::swap(pi[m], pi[r]);
    return pi;
}

inline bool graphs_equal(const WeightedGraph& g1, const WeightedGraph& g2) {
    return g1 == g2;
}

/// Drops vertex v; vertices above v shift down by one.
inline WeightedGraph remove_vertex(const WeightedGraph& g, int v) {
    int n = g.size();
    if (v < 0 || v >= n)
        throw std::out_of_range("remove_vertex: vertex index out of range");
    if (n == 1)
        throw std::invalid_argument("remove_vertex: cannot empty a graph");
    WeightedGraph out(n - 1, g.modulus());
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
            if (j == v || k == v)
                continue;
            Weight w = g.weight(j, k);
            if (w != Weight(0))
                out.set_weight(j < v ? j : j - 1, k < v ? k : k - 1, w);
        }
    return out;
}

/// Nonzero edges as (j, k, w) with j < k, lexicographic.
inline std::vector<std::tuple<int, int, Weight>> edge_list(const WeightedGraph& g) {
    std::vector<std::tuple<int, int, Weight>> edges;
    for (int j = 0; j < g.size(); ++j)
        for (int k = j + 1; k < g.size(); ++k) {
            Weight w = g.weight(j, k);
            if (w != Weight(0))
                edges.emplace_back(j, k, w);
        }
    return edges;
}

inline int degree(const WeightedGraph& g, int v) {
    return static_cast<int>(neighborhood(g, v).size());
}

}  // namespace seqmbqc
