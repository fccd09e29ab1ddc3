#pragma once

#include <vector>

#include "ccn/graph.hpp"
#include "ccn/tensor.hpp"

namespace ccn {

/// Ordered vertex list a neuron's activation refers to.
struct ReceptiveField {
    std::vector<int> vertices;  // no duplicates, canonical ascending order
    int level = 0;

    int size() const { return static_cast<int>(vertices.size()); }
    /// Position of vertex v in the field, or -1.
    int position_of(int v) const;
};

/// Layered composition scheme: one node per vertex per level 0..L, plus a
/// root over all vertices. Level-0 fields are singletons; the level-l field
/// of vertex i is the union of the level-(l-1) fields of its closed
/// neighborhood N(i) u {i}.
struct CompositionScheme {
    int n = 0;
    int depth = 0;  // L
    std::vector<std::vector<ReceptiveField>> fields;      // [level][vertex]
    std::vector<std::vector<std::vector<int>>> children;  // [level][vertex], level >= 1
    ReceptiveField root;                                  // all vertices, level L+1

    const ReceptiveField& field(int level, int vertex) const { return fields[level][vertex]; }
};

CompositionScheme build_scheme(const Graph& g, int levels);

/// True iff sigma maps the fields of s1 onto the fields of s2 level by level
/// (as sets, via some bijection of nodes within each level).
bool scheme_isomorphism_check(const CompositionScheme& s1, const CompositionScheme& s2,
                              const Permutation& sigma);

/// [A restricted]_{a,b} = A[p_a][p_b] over the ordered field (p_1..p_m).
DenseTensor restrict_adjacency(const Graph& g, const ReceptiveField& field);

} // namespace ccn
