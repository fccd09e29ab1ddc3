#pragma once

#include <string>
#include <vector>

#include "ccn/layers.hpp"
#include "ccn/tape.hpp"

namespace ccn {

/// Shape of a network: activation order, depth, channel widths and the
/// contraction budget shared by all levels.
struct Architecture {
    int order = 2;  // 0, 1 or 2 in shipped configs
    int levels = 2;
    bool use_adjacency = true;
    int in_channels = 1;      // base feature dimension
    std::vector<int> widths;  // output channels per level 1..levels
    int contraction_cap = 10;
    int out_dim = 2;
    bool relu = true;

    void validate() const;
};

struct CcnModel {
    Architecture arch;
    std::vector<LayerParams> layers;  // per level 1..levels
    ReadoutParams head;

    struct ParamRef {
        std::string name;
        DenseTensor* tensor;
    };

    static CcnModel init(const Architecture& arch, std::uint64_t seed);

    std::vector<ParamRef> params();
    std::vector<ParamRef> params() const;  // refs to const-cast views for read-only walks
    index_t param_count() const;
};

/// Per-vertex base feature rows (n x in_channels).
using FeatureMatrix = std::vector<std::vector<real_t>>;

/// Magnitude statistics collected during a forward pass: sum of squares and
/// entry counts of each level's pre-nonlinearity activation, plus the pooled
/// per-channel sums feeding the readout affine map.
struct ForwardProbe {
    std::vector<real_t> level_sumsq;
    std::vector<index_t> level_count;
    real_t pooled_sumsq = 0;
    index_t pooled_count = 0;
};

/// Records the whole forward pass on `tape`; returns the order-1 logits node.
/// When `param_leaves` is non-null the parameters become gradient leaves and
/// their node ids are appended in CcnModel::params() order.
Tape::NodeId build_forward(Tape& tape, const CcnModel& model, const Graph& g,
                           const CompositionScheme& scheme, const FeatureMatrix& features,
                           std::vector<Tape::NodeId>* param_leaves,
                           ForwardProbe* probe = nullptr);

/// Rescales each level's mixing matrix (then the readout map) so that
/// pre-nonlinearity activations have unit RMS over the sample graphs. Tensor
/// sums over large receptive fields otherwise grow by orders of magnitude per
/// level, which saturates the loss at the configured learning rate. A pure
/// rescaling keeps every covariance property intact.
void calibrate_init(CcnModel& model, const std::vector<const Graph*>& graphs,
                    const std::vector<const CompositionScheme*>& schemes,
                    const std::vector<const FeatureMatrix*>& features);

/// Pure forward pass: the invariant graph representation phi(G).
std::vector<real_t> forward(const Graph& g, const CompositionScheme& scheme,
                            const CcnModel& model, const FeatureMatrix& features);

} // namespace ccn
