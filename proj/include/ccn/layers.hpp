#pragma once

#include <vector>

#include "ccn/contraction.hpp"
#include "ccn/scheme.hpp"

namespace ccn {

/// Indicator matrix embedding a child field P_a into a parent field P_b:
/// chi[i][j] = 1 iff parent vertex q_j equals child vertex p_i. Stored as
/// position maps since each row has exactly one 1.
struct PromotionMatrix {
    int child_size = 0;
    int parent_size = 0;
    std::vector<int> parent_pos_of_child;  // length child_size
    std::vector<int> child_pos_of_parent;  // length parent_size, -1 where absent

    static PromotionMatrix build(const ReceptiveField& child, const ReceptiveField& parent);

    real_t chi(int i, int j) const { return parent_pos_of_child[i] == j ? 1.0 : 0.0; }
    DenseTensor to_matrix() const;
};

/// Activation of one neuron: c channel tensors, each cubic with extent
/// |field| and a common order k. `vertex` is the neuron's own vertex, which
/// selects its slot when a parent stacks its children.
struct NodeActivation {
    ReceptiveField field;
    std::vector<DenseTensor> channels;
    int vertex = -1;

    int order() const { return channels.empty() ? 0 : channels[0].order(); }
    void validate() const;
};

/// Learnable parameters of one aggregation level.
/// weight is the s' x s x s0 mixing tensor stored as an [s', s*s0] matrix
/// with column index j*s0 + c0 (contraction channel j, input channel c0).
struct LayerParams {
    int order = 0;
    bool use_adjacency = false;
    int in_channels = 1;
    int out_channels = 1;
    std::vector<ContractionSpec> contractions;
    DenseTensor weight;
    DenseTensor bias;
    bool relu = true;

    int contraction_count() const { return static_cast<int>(contractions.size()); }
    /// Order of the stacked (and optionally adjacency-multiplied) tensor the
    /// contraction specs consume.
    int pre_contraction_order() const { return order + 1 + (use_adjacency ? 2 : 0); }
    void validate() const;
};

/// Final affine map applied to the per-channel vertex sums at the root.
struct ReadoutParams {
    DenseTensor weight;  // [outputs, channels]
    DenseTensor bias;    // [outputs]
};

/// Embeds a child P-tensor into the parent index space per the chi indicator;
/// entries at parent positions absent from the child field are zero.
DenseTensor promote(const DenseTensor& child, const PromotionMatrix& chi);

/// Assembles order-k tensors into an order-(k+1) tensor whose last index
/// ranges over parent positions; slice slots[u] holds promoted[u], all other
/// slices are zero.
DenseTensor stack(std::span<const DenseTensor> promoted, std::span<const int> slots,
                  int parent_size);

/// tensor_product(t, a_restricted) with the cubic/extent checks of the
/// aggregation rule; raises order by 2.
DenseTensor adjacency_product(const DenseTensor& t, const DenseTensor& a_restricted);

/// The six-step aggregation rule: promote each child channel, stack per input
/// channel, optionally multiply by the restricted adjacency, contract by every
/// spec in params, then mix channels and apply the nonlinearity.
/// `adjacency` must be the restriction of the graph adjacency to parent_field.
NodeActivation aggregate(const ReceptiveField& parent_field,
                         const std::vector<NodeActivation>& children, const LayerParams& params,
                         const DenseTensor& adjacency);

/// Contracts every channel of every level-L activation to a scalar (full
/// projection), sums over vertices per channel, applies the affine map.
std::vector<real_t> readout(const std::vector<NodeActivation>& root_inputs,
                            const ReadoutParams& params);

} // namespace ccn
