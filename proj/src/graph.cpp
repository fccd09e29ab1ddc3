#include "ccn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccn {

Permutation Permutation::identity(int m) {
    Permutation p;
    p.map.resize(m);
    std::iota(p.map.begin(), p.map.end(), 0);
    return p;
}

Permutation Permutation::inverse() const {
    Permutation inv;
    inv.map.assign(map.size(), 0);
    for (int i = 0; i < size(); ++i) inv.map[map[i]] = i;
    return inv;
}

void Permutation::validate() const {
    std::vector<char> seen(map.size(), 0);
    for (int v : map) {
        require(v >= 0 && v < size(), "permutation value ", v, " out of range for size ", size());
        require(!seen[v], "permutation repeats value ", v);
        seen[v] = 1;
    }
}

bool Permutation::is_identity() const {
    for (int i = 0; i < size(); ++i)
        if (map[i] != i) return false;
    return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
    require(outer.size() == inner.size(), "cannot compose permutations of sizes ", outer.size(),
            " and ", inner.size());
    Permutation r;
    r.map.resize(inner.map.size());
    for (int i = 0; i < inner.size(); ++i) r.map[i] = outer(inner(i));
    return r;
}

std::vector<Permutation> all_permutations(int m) {
    std::vector<int> v(m);
    std::iota(v.begin(), v.end(), 0);
    std::vector<Permutation> out;
    do {
        Permutation p;
        p.map = v;
        out.push_back(std::move(p));
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

Graph::Graph(int n_vertices, int label_dim)
    : n(n_vertices),
      adjacency(static_cast<size_t>(n_vertices) * n_vertices, 0.0),
      labels(n_vertices, std::vector<real_t>(label_dim, 0.0)) {}

void Graph::set_edge(int i, int j, real_t w) {
    require(i != j, "self-loop at vertex ", i, " is not allowed");
    require(i >= 0 && i < n && j >= 0 && j < n, "edge (", i, ",", j, ") out of range");
    adjacency[static_cast<size_t>(i) * n + j] = w;
    adjacency[static_cast<size_t>(j) * n + i] = w;
}

std::vector<int> Graph::neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n; ++j)
        if (adj(i, j) != 0.0) out.push_back(j);
    return out;
}

void Graph::validate() const {
    require(static_cast<index_t>(adjacency.size()) == static_cast<index_t>(n) * n,
            "adjacency storage does not match vertex count");
    require(static_cast<int>(labels.size()) == n, "expected ", n, " label rows, got ",
            labels.size());
    const int d = label_dim();
    for (int i = 0; i < n; ++i) {
        require(static_cast<int>(labels[i].size()) == d, "label row ", i, " has dimension ",
                labels[i].size(), ", expected ", d);
        require(adj(i, i) == 0.0, "nonzero diagonal at vertex ", i);
        for (int j = 0; j < i; ++j)
            require(adj(i, j) == adj(j, i), "adjacency not symmetric at (", i, ",", j, ")");
    }
}

Graph permute_graph(const Graph& g, const Permutation& sigma) {
    require(sigma.size() == g.n, "permutation size ", sigma.size(), " does not match graph order ",
            g.n);
    Graph out(g.n, g.label_dim());
    for (int i = 0; i < g.n; ++i) {
        out.labels[sigma(i)] = g.labels[i];
        for (int j = 0; j < g.n; ++j)
            out.adjacency[static_cast<size_t>(sigma(i)) * g.n + sigma(j)] = g.adj(i, j);
    }
    return out;
}

} // namespace ccn
