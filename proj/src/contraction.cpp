#include "ccn/contraction.hpp"

#include <algorithm>

namespace ccn {

int ContractionSpec::removed_count() const {
    int total = 0;
    for (const auto& g : groups) total += static_cast<int>(g.size());
    return total;
}

std::string ContractionSpec::case_tag() const {
    std::vector<int> sizes;
    for (const auto& g : groups) sizes.push_back(static_cast<int>(g.size()));
    std::sort(sizes.begin(), sizes.end());
    std::string tag;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (i) tag += '+';
        tag += std::to_string(sizes[i]);
    }
    return tag;
}

bool ContractionSpec::is_pure_projection() const {
    for (const auto& g : groups)
        if (g.size() != 1) return false;
    return true;
}

std::string ContractionSpec::to_string() const {
    std::string s = "{";
    for (size_t gi = 0; gi < groups.size(); ++gi) {
        if (gi) s += ", ";
        s += "(";
        for (size_t t = 0; t < groups[gi].size(); ++t) {
            if (t) s += ",";
            s += std::to_string(groups[gi][t]);
        }
        s += ")";
    }
    s += "}";
    return s;
}

void ContractionSpec::validate() const {
    std::vector<char> used(order_in, 0);
    for (const auto& g : groups) {
        require(!g.empty(), "empty contraction group");
        for (int d : g) {
            require(d >= 0 && d < order_in, "contraction index ", d, " out of range for order ",
                    order_in);
            require(!used[d], "contraction index ", d, " appears in two groups");
            used[d] = 1;
        }
    }
    require(order_out() >= 0, "contraction removes more indices than the tensor has");
}

DenseTensor contract(const DenseTensor& a, const ContractionSpec& spec) {
    spec.validate();
    require(spec.order_in == a.order(), "spec expects order ", spec.order_in, ", tensor has order ",
            a.order());
    for (const auto& g : spec.groups)
        for (int d : g)
            require(a.shape()[d] == a.shape()[g[0]], "extent mismatch inside contraction group ",
                    spec.to_string());

    std::vector<char> removed(a.order(), 0);
    for (const auto& g : spec.groups)
        for (int d : g) removed[d] = 1;

    std::vector<int> out_shape;
    for (int d = 0; d < a.order(); ++d)
        if (!removed[d]) out_shape.push_back(a.shape()[d]);

    const auto in_strides = row_major_strides(a.shape());
    std::vector<index_t> survivor_strides;
    for (int d = 0; d < a.order(); ++d)
        if (!removed[d]) survivor_strides.push_back(in_strides[d]);

    // Each group contributes (sum of member strides) * bound value.
    std::vector<index_t> group_stride;
    std::vector<int> group_extent;
    for (const auto& g : spec.groups) {
        index_t s = 0;
        for (int d : g) s += in_strides[d];
        group_stride.push_back(s);
        group_extent.push_back(a.shape()[g[0]]);
    }

    DenseTensor out(out_shape);
    std::vector<int> oidx(out_shape.size(), 0);
    index_t oflat = 0;
    do {
        index_t base = 0;
        for (size_t d = 0; d < out_shape.size(); ++d) base += survivor_strides[d] * oidx[d];
        real_t acc = 0.0;
        std::vector<int> bound(spec.groups.size(), 0);
        do {
            index_t pos = base;
            for (size_t gi = 0; gi < bound.size(); ++gi) pos += group_stride[gi] * bound[gi];
            acc += a[pos];
        } while (next_index(bound, group_extent));
        out[oflat++] = acc;
    } while (next_index(oidx, out_shape));
    return out;
}

namespace {

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    for (int i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == n - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

// Set partitions of `elems` via restricted growth strings in lexicographic
// order; blocks are listed by first appearance.
std::vector<std::vector<std::vector<int>>> set_partitions(const std::vector<int>& elems) {
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<std::vector<int>>> out;
    std::vector<int> rgs(n, 0);
    while (true) {
        int blocks = 1;
        for (int i = 0; i < n; ++i) blocks = std::max(blocks, rgs[i] + 1);
        std::vector<std::vector<int>> part(blocks);
        for (int i = 0; i < n; ++i) part[rgs[i]].push_back(elems[i]);
        out.push_back(std::move(part));
        // Advance the growth string.
        int i = n - 1;
        for (; i > 0; --i) {
            int cap = 0;
            for (int j = 0; j < i; ++j) cap = std::max(cap, rgs[j]);
            if (rgs[i] <= cap) break;
        }
        if (i == 0) break;
        ++rgs[i];
        for (int j = i + 1; j < n; ++j) rgs[j] = 0;
    }
    return out;
}

} // namespace

std::vector<ContractionSpec> enumerate_contractions(int order_in, int order_out) {
    require(order_out >= 0, "negative output order");
    require(order_in > order_out, "cannot contract order ", order_in, " down to order ", order_out);
    const int p = order_in - order_out;
    std::vector<ContractionSpec> out;
    for (const auto& removed : combinations(order_in, p)) {
        for (auto& part : set_partitions(removed)) {
            ContractionSpec spec;
            spec.order_in = order_in;
            spec.groups = part;
            out.push_back(std::move(spec));
        }
    }
    return out;
}

std::vector<ContractionSpec> default_contraction_subset(int order_in, int order_out, int count) {
    const auto all = enumerate_contractions(order_in, order_out);
    std::vector<ContractionSpec> out;
    for (const auto& s : all)
        if (s.is_pure_projection() && static_cast<int>(out.size()) < count) out.push_back(s);
    for (const auto& s : all)
        if (!s.is_pure_projection() && static_cast<int>(out.size()) < count) out.push_back(s);
    return out;
}

} // namespace ccn
