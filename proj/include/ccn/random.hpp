#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ccn/graph.hpp"

namespace ccn {

/// Seeded generator with portable derived draws (the raw engine stream is
/// standardized; the derivations below avoid implementation-defined
/// distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    Permutation permutation(int m) {
        Permutation p = Permutation::identity(m);
        for (int i = m - 1; i > 0; --i) std::swap(p.map[i], p.map[uniform_int(0, i)]);
        return p;
    }

    std::vector<int> shuffled_indices(int n) {
        Permutation p = permutation(n);
        return p.map;
    }

private:
    std::mt19937_64 eng_;
};

/// Erdos-Renyi style graph with one-hot vertex labels.
inline Graph random_graph(Rng& rng, int n, double edge_prob, int label_dim) {
    Graph g(n, label_dim);
    for (int i = 0; i < n; ++i) g.labels[i][rng.uniform_int(0, label_dim - 1)] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < edge_prob) g.set_edge(i, j);
    return g;
}

} // namespace ccn
