#pragma once

#include <string>
#include <vector>

#include "ccn/tensor.hpp"

namespace ccn {

/// One generalized contraction: disjoint index groups over {0..order_in-1}.
/// A size-1 group is a plain projection (summation) of that index; a group of
/// size >= 2 sums over the shared diagonal of its indices.
struct ContractionSpec {
    int order_in = 0;
    std::vector<std::vector<int>> groups;

    int removed_count() const;
    int order_out() const { return order_in - removed_count(); }

    /// Partition shape of the removed indices, e.g. "1+1+1", "1+2", "3".
    std::string case_tag() const;
    /// True when every group has size 1.
    bool is_pure_projection() const;

    std::string to_string() const;
    void validate() const;

    bool operator==(const ContractionSpec& o) const {
        return order_in == o.order_in && groups == o.groups;
    }
};

/// Applies the generalized contraction. Surviving indices keep their original
/// relative order. Within each group all extents must agree.
DenseTensor contract(const DenseTensor& a, const ContractionSpec& spec);

/// All distinct contractions taking order k down to order r: every choice of
/// the removed index set (lexicographic) crossed with every set partition of
/// it (restricted-growth-string order). No symmetry deduplication.
std::vector<ContractionSpec> enumerate_contractions(int order_in, int order_out);

/// The default subset used by aggregation layers: pure projections first (in
/// catalog order), then the remaining specs in catalog order, truncated to
/// `count`.
std::vector<ContractionSpec> default_contraction_subset(int order_in, int order_out, int count);

} // namespace ccn
