#pragma once

#include <vector>

#include "ccn/common.hpp"

namespace ccn {

/// A bijection on {0..m-1}; map[i] is the image of i.
struct Permutation {
    std::vector<int> map;

    Permutation() = default;
    explicit Permutation(std::vector<int> m) : map(std::move(m)) { validate(); }

    static Permutation identity(int m);

    int size() const { return static_cast<int>(map.size()); }
    int operator()(int i) const { return map[i]; }

    Permutation inverse() const;
    void validate() const;
    bool is_identity() const;

    bool operator==(const Permutation& o) const { return map == o.map; }
};

/// compose(outer, inner): i -> outer(inner(i)).
Permutation compose(const Permutation& outer, const Permutation& inner);

/// Enumerates all m! permutations of {0..m-1} in lexicographic order.
std::vector<Permutation> all_permutations(int m);

/// Undirected weighted graph with per-vertex feature vectors.
/// Adjacency is symmetric with a zero diagonal (no self-loops).
struct Graph {
    int n = 0;
    std::vector<real_t> adjacency;            // n*n, row-major
    std::vector<std::vector<real_t>> labels;  // n rows of equal dimension

    Graph() = default;
    Graph(int n_vertices, int label_dim);

    real_t adj(int i, int j) const { return adjacency[static_cast<size_t>(i) * n + j]; }
    void set_edge(int i, int j, real_t w = 1.0);

    int label_dim() const { return labels.empty() ? 0 : static_cast<int>(labels[0].size()); }
    std::vector<int> neighbors(int i) const;

    void validate() const;
};

/// Relabels vertices: vertex i of g becomes vertex sigma(i), so
/// A'[i][j] = A[sigma^-1(i)][sigma^-1(j)] and l'_i = l_{sigma^-1(i)}.
Graph permute_graph(const Graph& g, const Permutation& sigma);

} // namespace ccn
