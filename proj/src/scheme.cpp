#include "ccn/scheme.hpp"

#include <algorithm>
#include <set>

namespace ccn {

int ReceptiveField::position_of(int v) const {
    for (int i = 0; i < size(); ++i)
        if (vertices[i] == v) return i;
    return -1;
}

CompositionScheme build_scheme(const Graph& g, int levels) {
    require(levels >= 1, "scheme depth must be at least 1, got ", levels);
    g.validate();

    CompositionScheme s;
    s.n = g.n;
    s.depth = levels;
    s.fields.resize(levels + 1);
    s.children.resize(levels + 1);

    s.fields[0].resize(g.n);
    for (int i = 0; i < g.n; ++i) s.fields[0][i] = ReceptiveField{{i}, 0};

    for (int level = 1; level <= levels; ++level) {
        s.fields[level].resize(g.n);
        s.children[level].resize(g.n);
        for (int i = 0; i < g.n; ++i) {
            std::vector<int> closed = g.neighbors(i);
            closed.push_back(i);
            std::sort(closed.begin(), closed.end());
            s.children[level][i] = closed;

            std::set<int> merged;
            for (int j : closed)
                merged.insert(s.fields[level - 1][j].vertices.begin(),
                              s.fields[level - 1][j].vertices.end());
            s.fields[level][i] =
                ReceptiveField{std::vector<int>(merged.begin(), merged.end()), level};
        }
    }

    s.root.vertices.resize(g.n);
    for (int i = 0; i < g.n; ++i) s.root.vertices[i] = i;
    s.root.level = levels + 1;
    return s;
}

bool scheme_isomorphism_check(const CompositionScheme& s1, const CompositionScheme& s2,
                              const Permutation& sigma) {
    if (s1.n != s2.n || s1.depth != s2.depth || sigma.size() != s1.n) return false;
    for (int level = 0; level <= s1.depth; ++level) {
        std::vector<std::vector<int>> mapped, actual;
        for (int i = 0; i < s1.n; ++i) {
            std::vector<int> f;
            for (int v : s1.fields[level][i].vertices) f.push_back(sigma(v));
            std::sort(f.begin(), f.end());
            mapped.push_back(std::move(f));
            actual.push_back(s2.fields[level][i].vertices);  // already sorted
        }
        std::sort(mapped.begin(), mapped.end());
        std::sort(actual.begin(), actual.end());
        if (mapped != actual) return false;
    }
    return true;
}

DenseTensor restrict_adjacency(const Graph& g, const ReceptiveField& field) {
    const int m = field.size();
    DenseTensor out({m, m});
    for (int a = 0; a < m; ++a) {
        const int va = field.vertices[a];
        require(va >= 0 && va < g.n, "field vertex ", va, " out of range");
        for (int b = 0; b < m; ++b) {
            const int vb = field.vertices[b];
            require(vb >= 0 && vb < g.n, "field vertex ", vb, " out of range");
            out.at({a, b}) = g.adj(va, vb);
        }
    }
    return out;
}

} // namespace ccn
