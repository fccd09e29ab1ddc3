#include "ccn/tape.hpp"

#include <algorithm>
#include <cmath>

namespace ccn {

namespace testing {
namespace {
bool g_corrupt_contract_adjoint = false;
}
void set_corrupt_contract_adjoint(bool enabled) { g_corrupt_contract_adjoint = enabled; }
bool corrupt_contract_adjoint() { return g_corrupt_contract_adjoint; }
} // namespace testing

Tape::NodeId Tape::push(Node n) {
    require(!ran_backward_, "tape is frozen after backward");
    for (NodeId in : n.inputs) {
        check_id(in);
        n.needs_grad = n.needs_grad || nodes_[in].needs_grad;
    }
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size()) - 1;
}

void Tape::check_id(NodeId id) const {
    require(id >= 0 && id < size(), "tape node id ", id, " out of range");
}

Tape::NodeId Tape::leaf(DenseTensor value, bool requires_grad) {
    Node n;
    n.op = Op::kLeaf;
    n.needs_grad = requires_grad;
    n.value = std::move(value);
    return push(std::move(n));
}

Tape::NodeId Tape::tensor_product(NodeId a, NodeId b) {
    check_id(a);
    check_id(b);
    Node n;
    n.op = Op::kTensorProduct;
    n.inputs = {a, b};
    n.value = ccn::tensor_product(nodes_[a].value, nodes_[b].value);
    return push(std::move(n));
}

Tape::NodeId Tape::elementwise_product(NodeId a, NodeId b, std::vector<int> dims) {
    check_id(a);
    check_id(b);
    Node n;
    n.op = Op::kElementwise;
    n.inputs = {a, b};
    n.value = ccn::elementwise_product(nodes_[a].value, nodes_[b].value, dims);
    n.ints = std::move(dims);
    return push(std::move(n));
}

Tape::NodeId Tape::project(NodeId a, std::vector<int> dims) {
    check_id(a);
    Node n;
    n.op = Op::kProject;
    n.inputs = {a};
    n.value = ccn::project(nodes_[a].value, dims);
    n.ints = std::move(dims);
    return push(std::move(n));
}

Tape::NodeId Tape::contract(NodeId a, ContractionSpec spec) {
    check_id(a);
    Node n;
    n.op = Op::kContract;
    n.inputs = {a};
    n.value = ccn::contract(nodes_[a].value, spec);
    n.spec = std::move(spec);
    return push(std::move(n));
}

Tape::NodeId Tape::promote(NodeId child, const PromotionMatrix& chi) {
    check_id(child);
    Node n;
    n.op = Op::kPromote;
    n.inputs = {child};
    n.value = ccn::promote(nodes_[child].value, chi);
    n.ints = {chi.parent_size};
    n.ints2 = chi.child_pos_of_parent;
    return push(std::move(n));
}

Tape::NodeId Tape::stack(std::vector<NodeId> slices, std::vector<int> slots, int parent_size) {
    std::vector<DenseTensor> vals;
    vals.reserve(slices.size());
    for (NodeId id : slices) {
        check_id(id);
        vals.push_back(nodes_[id].value);
    }
    Node n;
    n.op = Op::kStack;
    n.inputs = std::move(slices);
    n.value = ccn::stack(vals, slots, parent_size);
    n.ints = std::move(slots);
    n.ints.push_back(parent_size);
    return push(std::move(n));
}

Tape::NodeId Tape::linear_combination(std::vector<NodeId> inputs, std::vector<real_t> coeffs) {
    std::vector<DenseTensor> vals;
    vals.reserve(inputs.size());
    for (NodeId id : inputs) {
        check_id(id);
        vals.push_back(nodes_[id].value);
    }
    Node n;
    n.op = Op::kLinComb;
    n.inputs = std::move(inputs);
    n.value = ccn::linear_combination(vals, coeffs);
    n.reals = std::move(coeffs);
    return push(std::move(n));
}

Tape::NodeId Tape::mix(std::vector<NodeId> q, NodeId weight, NodeId bias) {
    require(!q.empty(), "mix needs at least one input channel");
    check_id(weight);
    check_id(bias);
    const DenseTensor& w = nodes_[weight].value;
    const DenseTensor& b = nodes_[bias].value;
    require(w.order() == 2, "mix weight must be a matrix");
    require(w.shape()[1] == static_cast<int>(q.size()), "mix weight has ", w.shape()[1],
            " columns for ", q.size(), " inputs");
    const int rows = w.shape()[0];
    require(b.order() == 1 && b.shape()[0] == rows, "mix bias length must match weight rows");

    const DenseTensor& q0 = nodes_[q[0]].value;
    for (NodeId id : q) {
        check_id(id);
        require(nodes_[id].value.same_shape(q0), "mix inputs must share one shape");
    }
    const index_t inner = q0.size();

    std::vector<int> out_shape;
    out_shape.push_back(rows);
    out_shape.insert(out_shape.end(), q0.shape().begin(), q0.shape().end());
    DenseTensor out(out_shape);
    auto ov = out.data();
    for (int i = 0; i < rows; ++i) {
        const real_t bi = b[i];
        for (index_t e = 0; e < inner; ++e) ov[i * inner + e] = bi;
    }
    const auto wv = w.data();
    const int cols = static_cast<int>(q.size());
    for (int j = 0; j < cols; ++j) {
        const auto qv = nodes_[q[j]].value.data();
        for (int i = 0; i < rows; ++i) {
            const real_t wij = wv[static_cast<index_t>(i) * cols + j];
            if (wij == 0.0) continue;
            real_t* dst = ov.data() + static_cast<index_t>(i) * inner;
            for (index_t e = 0; e < inner; ++e) dst[e] += wij * qv[e];
        }
    }

    Node n;
    n.op = Op::kMix;
    n.inputs = std::move(q);
    n.inputs.push_back(weight);
    n.inputs.push_back(bias);
    n.value = std::move(out);
    return push(std::move(n));
}

Tape::NodeId Tape::channel_slice(NodeId mixed, int channel) {
    check_id(mixed);
    const DenseTensor& src = nodes_[mixed].value;
    require(src.order() >= 1, "channel slice needs an order >= 1 tensor");
    require(channel >= 0 && channel < src.shape()[0], "channel ", channel, " out of range");
    std::vector<int> shape(src.shape().begin() + 1, src.shape().end());
    const index_t inner = src.size() / src.shape()[0];
    std::vector<real_t> data(src.data().begin() + channel * inner,
                             src.data().begin() + (channel + 1) * inner);
    Node n;
    n.op = Op::kChannelSlice;
    n.inputs = {mixed};
    n.value = DenseTensor(std::move(shape), std::move(data));
    n.ints = {channel};
    return push(std::move(n));
}

Tape::NodeId Tape::relu(NodeId a) {
    check_id(a);
    Node n;
    n.op = Op::kRelu;
    n.inputs = {a};
    DenseTensor v = nodes_[a].value;
    for (auto& x : v.data()) x = x > 0 ? x : 0;
    n.value = std::move(v);
    return push(std::move(n));
}

Tape::NodeId Tape::softmax_cross_entropy(NodeId logits, int target) {
    check_id(logits);
    const DenseTensor& z = nodes_[logits].value;
    require(z.order() == 1, "logits must be an order-1 tensor");
    require(target >= 0 && target < z.shape()[0], "target class ", target, " out of range");
    real_t zmax = z[0];
    for (index_t i = 1; i < z.size(); ++i) zmax = std::max(zmax, z[i]);
    real_t sum = 0;
    for (index_t i = 0; i < z.size(); ++i) sum += std::exp(z[i] - zmax);
    Node n;
    n.op = Op::kSoftmaxCE;
    n.inputs = {logits};
    n.value = DenseTensor::scalar(std::log(sum) + zmax - z[target]);
    n.ints = {target};
    return push(std::move(n));
}

Tape::NodeId Tape::mse(NodeId pred, std::vector<real_t> target) {
    check_id(pred);
    const DenseTensor& p = nodes_[pred].value;
    require(p.order() == 1, "prediction must be an order-1 tensor");
    require(p.size() == static_cast<index_t>(target.size()), "prediction length ", p.size(),
            " does not match target length ", target.size());
    real_t acc = 0;
    for (index_t i = 0; i < p.size(); ++i) {
        const real_t d = p[i] - target[i];
        acc += d * d;
    }
    Node n;
    n.op = Op::kMse;
    n.inputs = {pred};
    n.value = DenseTensor::scalar(acc / static_cast<real_t>(p.size()));
    n.reals = std::move(target);
    return push(std::move(n));
}

bool Tape::has_grad(NodeId id) const {
    check_id(id);
    return ran_backward_ && has_adjoint_[id];
}

const DenseTensor& Tape::grad(NodeId id) const {
    require(has_grad(id), "no gradient recorded for node ", id);
    return adjoints_[id];
}

void Tape::backward(NodeId loss) {
    check_id(loss);
    require(!ran_backward_, "backward may run once per tape");
    require(nodes_[loss].value.order() == 0, "backward requires a scalar seed");
    ran_backward_ = true;
    adjoints_.resize(nodes_.size());
    has_adjoint_.assign(nodes_.size(), 0);

    auto ensure = [&](NodeId id) -> DenseTensor& {
        if (!has_adjoint_[id]) {
            adjoints_[id] = DenseTensor(nodes_[id].value.shape());
            has_adjoint_[id] = 1;
        }
        return adjoints_[id];
    };
    ensure(loss)[0] = 1.0;

    for (NodeId id = loss; id >= 0; --id) {
        if (!has_adjoint_[id] || !nodes_[id].needs_grad) continue;
        const Node& n = nodes_[id];
        const DenseTensor& adj = adjoints_[id];
        auto wants = [&](size_t input_slot) { return nodes_[n.inputs[input_slot]].needs_grad; };

        switch (n.op) {
            case Op::kLeaf:
                break;
            case Op::kTensorProduct: {
                const DenseTensor& a = nodes_[n.inputs[0]].value;
                const DenseTensor& b = nodes_[n.inputs[1]].value;
                if (wants(0)) {
                    DenseTensor& da = ensure(n.inputs[0]);
                    for (index_t i = 0; i < a.size(); ++i) {
                        real_t acc = 0;
                        for (index_t j = 0; j < b.size(); ++j) acc += adj[i * b.size() + j] * b[j];
                        da[i] += acc;
                    }
                }
                if (wants(1)) {
                    DenseTensor& db = ensure(n.inputs[1]);
                    for (index_t i = 0; i < a.size(); ++i) {
                        const real_t ai = a[i];
                        if (ai == 0.0) continue;
                        for (index_t j = 0; j < b.size(); ++j)
                            db[j] += adj[i * b.size() + j] * ai;
                    }
                }
                break;
            }
            case Op::kElementwise: {
                const DenseTensor& a = nodes_[n.inputs[0]].value;
                const DenseTensor& b = nodes_[n.inputs[1]].value;
                const auto b_strides = row_major_strides(b.shape());
                std::vector<int> idx(a.order(), 0);
                index_t flat = 0;
                DenseTensor* da = wants(0) ? &ensure(n.inputs[0]) : nullptr;
                DenseTensor* db = wants(1) ? &ensure(n.inputs[1]) : nullptr;
                do {
                    index_t bpos = 0;
                    for (size_t t = 0; t < n.ints.size(); ++t)
                        bpos += b_strides[t] * idx[n.ints[t]];
                    if (da) (*da)[flat] += adj[flat] * b[bpos];
                    if (db) (*db)[bpos] += adj[flat] * a[flat];
                    ++flat;
                } while (next_index(idx, a.shape()));
                break;
            }
            case Op::kProject: {
                if (!wants(0)) break;
                const DenseTensor& a = nodes_[n.inputs[0]].value;
                DenseTensor& da = ensure(n.inputs[0]);
                std::vector<char> removed(a.order(), 0);
                for (int d : n.ints) removed[d] = 1;
                const auto out_strides = row_major_strides(n.value.shape());
                std::vector<index_t> contrib(a.order(), 0);
                int keep = 0;
                for (int d = 0; d < a.order(); ++d)
                    if (!removed[d]) contrib[d] = out_strides[keep++];
                std::vector<int> idx(a.order(), 0);
                index_t flat = 0;
                do {
                    index_t opos = 0;
                    for (int d = 0; d < a.order(); ++d) opos += contrib[d] * idx[d];
                    da[flat] += adj[opos];
                    ++flat;
                } while (next_index(idx, a.shape()));
                break;
            }
            case Op::kContract: {
                if (!wants(0)) break;
                const DenseTensor& a = nodes_[n.inputs[0]].value;
                DenseTensor& da = ensure(n.inputs[0]);
                const real_t sign = testing::corrupt_contract_adjoint() ? -1.0 : 1.0;
                std::vector<char> removed(a.order(), 0);
                for (const auto& g : n.spec.groups)
                    for (int d : g) removed[d] = 1;
                const auto in_strides = row_major_strides(a.shape());
                std::vector<index_t> survivor_strides;
                std::vector<int> out_shape;
                for (int d = 0; d < a.order(); ++d)
                    if (!removed[d]) {
                        survivor_strides.push_back(in_strides[d]);
                        out_shape.push_back(a.shape()[d]);
                    }
                std::vector<index_t> group_stride;
                std::vector<int> group_extent;
                for (const auto& g : n.spec.groups) {
                    index_t s = 0;
                    for (int d : g) s += in_strides[d];
                    group_stride.push_back(s);
                    group_extent.push_back(a.shape()[g[0]]);
                }
                std::vector<int> oidx(out_shape.size(), 0);
                index_t oflat = 0;
                do {
                    index_t base = 0;
                    for (size_t d = 0; d < out_shape.size(); ++d)
                        base += survivor_strides[d] * oidx[d];
                    const real_t g = sign * adj[oflat];
                    std::vector<int> bound(n.spec.groups.size(), 0);
                    do {
                        index_t pos = base;
                        for (size_t gi = 0; gi < bound.size(); ++gi)
                            pos += group_stride[gi] * bound[gi];
                        da[pos] += g;
                    } while (next_index(bound, group_extent));
                    ++oflat;
                } while (next_index(oidx, out_shape));
                break;
            }
            case Op::kPromote: {
                if (!wants(0)) break;
                const DenseTensor& child = nodes_[n.inputs[0]].value;
                DenseTensor& da = ensure(n.inputs[0]);
                const int k = child.order();
                if (k == 0) {
                    da[0] += adj[0];
                    break;
                }
                const int parent_size = n.ints[0];
                // parent position of each child position
                std::vector<int> parent_pos(child.cubic_extent(), -1);
                for (int j = 0; j < parent_size; ++j)
                    if (n.ints2[j] >= 0) parent_pos[n.ints2[j]] = j;
                const auto adj_strides = row_major_strides(n.value.shape());
                std::vector<int> cidx(k, 0);
                index_t cflat = 0;
                do {
                    index_t ppos = 0;
                    for (int d = 0; d < k; ++d) ppos += adj_strides[d] * parent_pos[cidx[d]];
                    da[cflat] += adj[ppos];
                    ++cflat;
                } while (next_index(cidx, child.shape()));
                break;
            }
            case Op::kStack: {
                const int parent_size = n.ints.back();
                const index_t inner = n.value.size() / parent_size;
                for (size_t u = 0; u < n.inputs.size(); ++u) {
                    if (!wants(u)) continue;
                    DenseTensor& da = ensure(n.inputs[u]);
                    const int j = n.ints[u];
                    for (index_t e = 0; e < inner; ++e) da[e] += adj[e * parent_size + j];
                }
                break;
            }
            case Op::kLinComb: {
                for (size_t u = 0; u < n.inputs.size(); ++u) {
                    if (!wants(u)) continue;
                    DenseTensor& da = ensure(n.inputs[u]);
                    const real_t c = n.reals[u];
                    for (index_t e = 0; e < da.size(); ++e) da[e] += c * adj[e];
                }
                break;
            }
            case Op::kMix: {
                const size_t cols = n.inputs.size() - 2;
                const NodeId wid = n.inputs[cols];
                const NodeId bid = n.inputs[cols + 1];
                const DenseTensor& w = nodes_[wid].value;
                const int rows = w.shape()[0];
                const index_t inner = n.value.size() / rows;
                if (nodes_[wid].needs_grad) {
                    DenseTensor& dw = ensure(wid);
                    for (size_t j = 0; j < cols; ++j) {
                        const auto qv = nodes_[n.inputs[j]].value.data();
                        for (int i = 0; i < rows; ++i) {
                            real_t acc = 0;
                            const real_t* av = adj.data().data() + i * inner;
                            for (index_t e = 0; e < inner; ++e) acc += av[e] * qv[e];
                            dw[static_cast<index_t>(i) * cols + j] += acc;
                        }
                    }
                }
                if (nodes_[bid].needs_grad) {
                    DenseTensor& db = ensure(bid);
                    for (int i = 0; i < rows; ++i) {
                        real_t acc = 0;
                        const real_t* av = adj.data().data() + i * inner;
                        for (index_t e = 0; e < inner; ++e) acc += av[e];
                        db[i] += acc;
                    }
                }
                for (size_t j = 0; j < cols; ++j) {
                    if (!wants(j)) continue;
                    DenseTensor& dq = ensure(n.inputs[j]);
                    for (int i = 0; i < rows; ++i) {
                        const real_t wij = w[static_cast<index_t>(i) * cols + j];
                        if (wij == 0.0) continue;
                        const real_t* av = adj.data().data() + i * inner;
                        for (index_t e = 0; e < inner; ++e) dq[e] += wij * av[e];
                    }
                }
                break;
            }
            case Op::kChannelSlice: {
                if (!wants(0)) break;
                DenseTensor& da = ensure(n.inputs[0]);
                const index_t inner = n.value.size();
                const index_t off = static_cast<index_t>(n.ints[0]) * inner;
                for (index_t e = 0; e < inner; ++e) da[off + e] += adj[e];
                break;
            }
            case Op::kRelu: {
                if (!wants(0)) break;
                const DenseTensor& a = nodes_[n.inputs[0]].value;
                DenseTensor& da = ensure(n.inputs[0]);
                for (index_t e = 0; e < a.size(); ++e)
                    if (a[e] > 0) da[e] += adj[e];
                break;
            }
            case Op::kSoftmaxCE: {
                if (!wants(0)) break;
                const DenseTensor& z = nodes_[n.inputs[0]].value;
                DenseTensor& dz = ensure(n.inputs[0]);
                real_t zmax = z[0];
                for (index_t i = 1; i < z.size(); ++i) zmax = std::max(zmax, z[i]);
                real_t sum = 0;
                for (index_t i = 0; i < z.size(); ++i) sum += std::exp(z[i] - zmax);
                const real_t g = adj[0];
                for (index_t i = 0; i < z.size(); ++i) {
                    real_t soft = std::exp(z[i] - zmax) / sum;
                    if (static_cast<int>(i) == n.ints[0]) soft -= 1.0;
                    dz[i] += g * soft;
                }
                break;
            }
            case Op::kMse: {
                if (!wants(0)) break;
                const DenseTensor& p = nodes_[n.inputs[0]].value;
                DenseTensor& dp = ensure(n.inputs[0]);
                const real_t g = adj[0] * 2.0 / static_cast<real_t>(p.size());
                for (index_t i = 0; i < p.size(); ++i) dp[i] += g * (p[i] - n.reals[i]);
                break;
            }
        }
    }
}

} // namespace ccn
