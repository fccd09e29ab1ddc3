#include "ccn/model.hpp"

#include <cmath>

#include "ccn/random.hpp"

namespace ccn {

void Architecture::validate() const {
    require(order >= 0, "negative activation order");
    require(levels >= 1, "need at least one level");
    require(in_channels >= 1, "need at least one input channel");
    require(static_cast<int>(widths.size()) == levels, "expected ", levels, " width entries, got ",
            widths.size());
    for (int w : widths) require(w >= 1, "channel width must be positive");
    require(contraction_cap >= 1, "contraction cap must be positive");
    require(out_dim >= 1, "output dimension must be positive");
}

namespace {

DenseTensor uniform_tensor(Rng& rng, std::vector<int> shape, real_t bound) {
    DenseTensor t(std::move(shape));
    for (auto& v : t.data()) v = static_cast<real_t>(rng.uniform(-bound, bound));
    return t;
}

// Contraction of H = T (x) A without materializing H, valid for pure
// projections: the summation factorizes over the two operands.
Tape::NodeId fused_projection(Tape& tape, Tape::NodeId t_node, Tape::NodeId a_node, int t_order,
                              const ContractionSpec& spec) {
    std::vector<int> t_dims, a_dims;
    for (const auto& g : spec.groups) {
        if (g[0] < t_order)
            t_dims.push_back(g[0]);
        else
            a_dims.push_back(g[0] - t_order);
    }
    Tape::NodeId left = t_dims.empty() ? t_node : tape.project(t_node, t_dims);
    Tape::NodeId right = a_dims.empty() ? a_node : tape.project(a_node, a_dims);
    return tape.tensor_product(left, right);
}

struct ChildRef {
    const ReceptiveField* field;
    int slot;  // position of the child's own vertex in the parent field
    const std::vector<Tape::NodeId>* channels;
};

struct AggregateNodes {
    std::vector<Tape::NodeId> channels;
    Tape::NodeId pre_activation;
};

// The six-step aggregation rule on the tape; returns one node per output
// channel. Shared by training, the pure wrappers and the verify suites.
AggregateNodes tape_aggregate(Tape& tape, const ReceptiveField& parent_field,
                              const std::vector<ChildRef>& children, const LayerParams& params,
                              Tape::NodeId weight_leaf, Tape::NodeId bias_leaf,
                              Tape::NodeId adjacency_leaf) {
    params.validate();
    const int m_parent = parent_field.size();
    require(!params.use_adjacency || adjacency_leaf >= 0,
            "layer uses the adjacency product but no restriction was supplied");

    // Steps 1-3: promote every child channel and stack per input channel.
    std::vector<PromotionMatrix> chis;
    std::vector<int> slots;
    for (const auto& c : children) {
        chis.push_back(PromotionMatrix::build(*c.field, parent_field));
        slots.push_back(c.slot);
        require(static_cast<int>(c.channels->size()) == params.in_channels, "child carries ",
                c.channels->size(), " channels, layer expects ", params.in_channels);
    }
    std::vector<Tape::NodeId> stacked;  // per input channel
    for (int c0 = 0; c0 < params.in_channels; ++c0) {
        std::vector<Tape::NodeId> promoted;
        for (size_t u = 0; u < children.size(); ++u)
            promoted.push_back(tape.promote((*children[u].channels)[c0], chis[u]));
        stacked.push_back(tape.stack(std::move(promoted), slots, m_parent));
    }

    // Steps 4-5: optional adjacency product, then every contraction spec.
    // Pure projections of T (x) A factorize and skip the big intermediate.
    std::vector<Tape::NodeId> h_nodes(params.in_channels, -1);
    auto h_for = [&](int c0) {
        if (h_nodes[c0] < 0) h_nodes[c0] = tape.tensor_product(stacked[c0], adjacency_leaf);
        return h_nodes[c0];
    };
    std::vector<Tape::NodeId> q;
    for (const auto& spec : params.contractions) {
        for (int c0 = 0; c0 < params.in_channels; ++c0) {
            if (!params.use_adjacency)
                q.push_back(tape.contract(stacked[c0], spec));
            else if (spec.is_pure_projection())
                q.push_back(
                    fused_projection(tape, stacked[c0], adjacency_leaf, params.order + 1, spec));
            else
                q.push_back(tape.contract(h_for(c0), spec));
        }
    }

    // Step 6: mix with W, add the bias times the all-ones tensor, apply the
    // nonlinearity.
    const Tape::NodeId pre = tape.mix(std::move(q), weight_leaf, bias_leaf);
    const Tape::NodeId mixed = params.relu ? tape.relu(pre) : pre;
    AggregateNodes out;
    out.pre_activation = pre;
    for (int i = 0; i < params.out_channels; ++i)
        out.channels.push_back(tape.channel_slice(mixed, i));
    return out;
}

// Full projection of each channel to a scalar, vertex sums per channel, then
// the affine head; returns the order-1 logits node.
Tape::NodeId tape_readout(Tape& tape, const std::vector<std::vector<Tape::NodeId>>& vertex_channels,
                          int num_channels, Tape::NodeId weight_leaf, Tape::NodeId bias_leaf,
                          ForwardProbe* probe = nullptr) {
    std::vector<Tape::NodeId> sums;
    for (int c = 0; c < num_channels; ++c) {
        std::vector<Tape::NodeId> scalars;
        for (const auto& channels : vertex_channels) {
            Tape::NodeId node = channels[c];
            const int k = tape.value(node).order();
            if (k > 0) {
                std::vector<int> all_dims(k);
                for (int d = 0; d < k; ++d) all_dims[d] = d;
                node = tape.project(node, all_dims);
            }
            scalars.push_back(node);
        }
        sums.push_back(tape.linear_combination(
            std::move(scalars), std::vector<real_t>(vertex_channels.size(), 1.0)));
        if (probe) {
            const real_t v = tape.value(sums.back())[0];
            probe->pooled_sumsq += v * v;
            ++probe->pooled_count;
        }
    }
    return tape.mix(std::move(sums), weight_leaf, bias_leaf);
}

} // namespace

CcnModel CcnModel::init(const Architecture& arch, std::uint64_t seed) {
    arch.validate();
    CcnModel m;
    m.arch = arch;
    Rng rng(seed);
    for (int level = 1; level <= arch.levels; ++level) {
        LayerParams lp;
        lp.order = arch.order;
        lp.use_adjacency = arch.use_adjacency;
        lp.in_channels = level == 1 ? arch.in_channels : arch.widths[level - 2];
        lp.out_channels = arch.widths[level - 1];
        lp.relu = arch.relu;
        lp.contractions = default_contraction_subset(lp.pre_contraction_order(), arch.order,
                                                     arch.contraction_cap);
        const int fan_in = lp.contraction_count() * lp.in_channels;
        const real_t bound = std::sqrt(6.0 / (fan_in + lp.out_channels));
        lp.weight = uniform_tensor(rng, {lp.out_channels, fan_in}, bound);
        lp.bias = DenseTensor({lp.out_channels});
        lp.validate();
        m.layers.push_back(std::move(lp));
    }
    const int c = arch.widths.back();
    const real_t bound = std::sqrt(6.0 / (c + arch.out_dim));
    m.head.weight = uniform_tensor(rng, {arch.out_dim, c}, bound);
    m.head.bias = DenseTensor({arch.out_dim});
    return m;
}

std::vector<CcnModel::ParamRef> CcnModel::params() {
    std::vector<ParamRef> out;
    for (size_t l = 0; l < layers.size(); ++l) {
        const std::string prefix = "layer" + std::to_string(l + 1);
        out.push_back({prefix + ".weight", &layers[l].weight});
        out.push_back({prefix + ".bias", &layers[l].bias});
    }
    out.push_back({"readout.weight", &head.weight});
    out.push_back({"readout.bias", &head.bias});
    return out;
}

std::vector<CcnModel::ParamRef> CcnModel::params() const {
    return const_cast<CcnModel*>(this)->params();
}

index_t CcnModel::param_count() const {
    index_t total = 0;
    for (const auto& p : params()) total += p.tensor->size();
    return total;
}

Tape::NodeId build_forward(Tape& tape, const CcnModel& model, const Graph& g,
                           const CompositionScheme& scheme, const FeatureMatrix& features,
                           std::vector<Tape::NodeId>* param_leaves, ForwardProbe* probe) {
    model.arch.validate();
    if (probe) {
        probe->level_sumsq.assign(model.arch.levels, 0.0);
        probe->level_count.assign(model.arch.levels, 0);
    }
    require(scheme.n == g.n, "scheme was built for a different graph order");
    require(scheme.depth == model.arch.levels, "scheme depth ", scheme.depth,
            " does not match model depth ", model.arch.levels);
    require(static_cast<int>(features.size()) == g.n, "expected ", g.n, " feature rows, got ",
            features.size());
    for (const auto& row : features)
        require(static_cast<int>(row.size()) == model.arch.in_channels, "feature row length ",
                row.size(), " does not match input channel count ", model.arch.in_channels);

    const bool with_grad = param_leaves != nullptr;
    std::vector<Tape::NodeId> weight_ids, bias_ids;
    for (const auto& lp : model.layers) {
        weight_ids.push_back(tape.leaf(lp.weight, with_grad));
        bias_ids.push_back(tape.leaf(lp.bias, with_grad));
    }
    const Tape::NodeId head_w = tape.leaf(model.head.weight, with_grad);
    const Tape::NodeId head_b = tape.leaf(model.head.bias, with_grad);
    if (param_leaves) {
        for (size_t l = 0; l < model.layers.size(); ++l) {
            param_leaves->push_back(weight_ids[l]);
            param_leaves->push_back(bias_ids[l]);
        }
        param_leaves->push_back(head_w);
        param_leaves->push_back(head_b);
    }

    // Level 0: each vertex's base feature scalars as single-entry tensors of
    // the model order.
    const std::vector<int> lift_shape(model.arch.order, 1);
    std::vector<std::vector<Tape::NodeId>> activations(g.n);
    for (int i = 0; i < g.n; ++i)
        for (int c = 0; c < model.arch.in_channels; ++c)
            activations[i].push_back(tape.leaf(DenseTensor(lift_shape, {features[i][c]})));

    for (int level = 1; level <= scheme.depth; ++level) {
        const LayerParams& lp = model.layers[level - 1];
        std::vector<std::vector<Tape::NodeId>> next(g.n);
        for (int t = 0; t < g.n; ++t) {
            const ReceptiveField& parent = scheme.field(level, t);
            Tape::NodeId adjacency_leaf = -1;
            if (lp.use_adjacency) adjacency_leaf = tape.leaf(restrict_adjacency(g, parent));
            std::vector<ChildRef> children;
            for (int j : scheme.children[level][t]) {
                const int slot = parent.position_of(j);
                require(slot >= 0, "child vertex ", j, " missing from parent field");
                children.push_back({&scheme.field(level - 1, j), slot, &activations[j]});
            }
            AggregateNodes agg = tape_aggregate(tape, parent, children, lp, weight_ids[level - 1],
                                                bias_ids[level - 1], adjacency_leaf);
            if (probe) {
                const DenseTensor& pre = tape.value(agg.pre_activation);
                for (index_t e = 0; e < pre.size(); ++e)
                    probe->level_sumsq[level - 1] += pre[e] * pre[e];
                probe->level_count[level - 1] += pre.size();
            }
            next[t] = std::move(agg.channels);
        }
        activations = std::move(next);
    }

    return tape_readout(tape, activations, model.arch.widths.back(), head_w, head_b, probe);
}

void calibrate_init(CcnModel& model, const std::vector<const Graph*>& graphs,
                    const std::vector<const CompositionScheme*>& schemes,
                    const std::vector<const FeatureMatrix*>& features) {
    require(!graphs.empty(), "calibration needs at least one graph");
    require(graphs.size() == schemes.size() && graphs.size() == features.size(),
            "calibration inputs disagree");
    auto probe_pass = [&](ForwardProbe& total) {
        for (size_t i = 0; i < graphs.size(); ++i) {
            Tape tape;
            ForwardProbe probe;
            build_forward(tape, model, *graphs[i], *schemes[i], *features[i], nullptr, &probe);
            if (total.level_sumsq.empty()) {
                total.level_sumsq.assign(probe.level_sumsq.size(), 0.0);
                total.level_count.assign(probe.level_count.size(), 0);
            }
            for (size_t l = 0; l < probe.level_sumsq.size(); ++l) {
                total.level_sumsq[l] += probe.level_sumsq[l];
                total.level_count[l] += probe.level_count[l];
            }
            total.pooled_sumsq += probe.pooled_sumsq;
            total.pooled_count += probe.pooled_count;
        }
    };
    // Levels calibrate one at a time: rescaling level l changes what level
    // l+1 sees, so each round re-probes with the weights fixed so far.
    for (int level = 0; level < model.arch.levels; ++level) {
        ForwardProbe total;
        probe_pass(total);
        const real_t rms =
            std::sqrt(total.level_sumsq[level] / std::max<index_t>(total.level_count[level], 1));
        if (rms > 0)
            for (auto& w : model.layers[level].weight.data()) w /= rms;
    }
    ForwardProbe total;
    probe_pass(total);
    const real_t rms = std::sqrt(total.pooled_sumsq / std::max<index_t>(total.pooled_count, 1));
    if (rms > 0)
        for (auto& w : model.head.weight.data()) w /= rms;
}

std::vector<real_t> forward(const Graph& g, const CompositionScheme& scheme, const CcnModel& model,
                            const FeatureMatrix& features) {
    Tape tape;
    const Tape::NodeId logits = build_forward(tape, model, g, scheme, features, nullptr);
    const DenseTensor& v = tape.value(logits);
    return std::vector<real_t>(v.data().begin(), v.data().end());
}

NodeActivation aggregate(const ReceptiveField& parent_field,
                         const std::vector<NodeActivation>& children, const LayerParams& params,
                         const DenseTensor& adjacency) {
    Tape tape;
    std::vector<ChildRef> refs;
    std::vector<std::vector<Tape::NodeId>> channel_ids(children.size());
    for (size_t u = 0; u < children.size(); ++u) {
        children[u].validate();
        for (const auto& ch : children[u].channels) channel_ids[u].push_back(tape.leaf(ch));
        const int slot = parent_field.position_of(children[u].vertex);
        require(slot >= 0, "child vertex ", children[u].vertex, " missing from parent field");
        refs.push_back({&children[u].field, slot, &channel_ids[u]});
    }
    Tape::NodeId adjacency_leaf = -1;
    if (params.use_adjacency) {
        require(adjacency.order() == 2 && adjacency.shape()[0] == parent_field.size() &&
                    adjacency.shape()[1] == parent_field.size(),
                "adjacency must be restricted to the parent field");
        adjacency_leaf = tape.leaf(adjacency);
    }
    const Tape::NodeId w = tape.leaf(params.weight);
    const Tape::NodeId b = tape.leaf(params.bias);
    NodeActivation out;
    out.field = parent_field;
    const AggregateNodes agg = tape_aggregate(tape, parent_field, refs, params, w, b,
                                              adjacency_leaf);
    for (Tape::NodeId id : agg.channels) out.channels.push_back(tape.value(id));
    return out;
}

std::vector<real_t> readout(const std::vector<NodeActivation>& root_inputs,
                            const ReadoutParams& params) {
    require(!root_inputs.empty(), "readout needs at least one activation");
    Tape tape;
    std::vector<std::vector<Tape::NodeId>> vertex_channels;
    const int c = static_cast<int>(root_inputs[0].channels.size());
    for (const auto& act : root_inputs) {
        act.validate();
        require(static_cast<int>(act.channels.size()) == c,
                "all root inputs must share one channel count");
        std::vector<Tape::NodeId> ids;
        for (const auto& ch : act.channels) ids.push_back(tape.leaf(ch));
        vertex_channels.push_back(std::move(ids));
    }
    const Tape::NodeId logits = tape_readout(tape, vertex_channels, c, tape.leaf(params.weight),
                                             tape.leaf(params.bias));
    const DenseTensor& v = tape.value(logits);
    return std::vector<real_t>(v.data().begin(), v.data().end());
}

} // namespace ccn
