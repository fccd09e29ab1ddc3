#pragma once

#include <vector>

#include "ccn/layers.hpp"

namespace ccn {

namespace testing {
/// When enabled, the reverse-mode rule for generalized contractions flips
/// sign. Exists solely as a negative control for gradient checks.
void set_corrupt_contract_adjoint(bool enabled);
bool corrupt_contract_adjoint();
} // namespace testing

/// Reverse-mode autodiff record. Nodes are appended in topological order
/// (inputs of node t always have ids < t); values are computed eagerly.
class Tape {
public:
    using NodeId = int;

    NodeId leaf(DenseTensor value, bool requires_grad = false);

    NodeId tensor_product(NodeId a, NodeId b);
    NodeId elementwise_product(NodeId a, NodeId b, std::vector<int> dims);
    NodeId project(NodeId a, std::vector<int> dims);
    NodeId contract(NodeId a, ContractionSpec spec);
    NodeId promote(NodeId child, const PromotionMatrix& chi);
    NodeId stack(std::vector<NodeId> slices, std::vector<int> slots, int parent_size);
    NodeId linear_combination(std::vector<NodeId> inputs, std::vector<real_t> coeffs);
    /// out[i, e...] = sum_j weight[i,j] * q_j[e...] + bias[i]; the bias term
    /// broadcasts over the all-ones tensor of the slice shape.
    NodeId mix(std::vector<NodeId> q, NodeId weight, NodeId bias);
    NodeId channel_slice(NodeId mixed, int channel);
    NodeId relu(NodeId a);
    /// Scalar loss: logsumexp(z) - z[target].
    NodeId softmax_cross_entropy(NodeId logits, int target);
    /// Scalar loss: mean over components of (pred - target)^2.
    NodeId mse(NodeId pred, std::vector<real_t> target);

    int size() const { return static_cast<int>(nodes_.size()); }
    const DenseTensor& value(NodeId id) const { return nodes_[id].value; }

    /// Seeds the scalar loss with gradient 1 and propagates adjoints to every
    /// gradient-requiring node. May be called once per tape.
    void backward(NodeId loss);

    bool has_grad(NodeId id) const;
    const DenseTensor& grad(NodeId id) const;

private:
    enum class Op : unsigned char {
        kLeaf,
        kTensorProduct,
        kElementwise,
        kProject,
        kContract,
        kPromote,
        kStack,
        kLinComb,
        kMix,
        kChannelSlice,
        kRelu,
        kSoftmaxCE,
        kMse
    };

    struct Node {
        Op op;
        bool needs_grad = false;
        std::vector<NodeId> inputs;
        DenseTensor value;
        // Op metadata; unused fields stay empty.
        std::vector<int> ints;      // dims / slots / {parent_size} / {channel} / {target}
        std::vector<int> ints2;     // promote: child_pos_of_parent
        std::vector<real_t> reals;  // lincomb coeffs / mse target
        ContractionSpec spec;
    };

    NodeId push(Node n);
    void check_id(NodeId id) const;

    std::vector<Node> nodes_;
    std::vector<DenseTensor> adjoints_;
    std::vector<char> has_adjoint_;
    bool ran_backward_ = false;
};

} // namespace ccn
