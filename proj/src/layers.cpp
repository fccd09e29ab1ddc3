#include "ccn/layers.hpp"

namespace ccn {

PromotionMatrix PromotionMatrix::build(const ReceptiveField& child, const ReceptiveField& parent) {
    PromotionMatrix chi;
    chi.child_size = child.size();
    chi.parent_size = parent.size();
    chi.parent_pos_of_child.assign(child.size(), -1);
    chi.child_pos_of_parent.assign(parent.size(), -1);
    for (int i = 0; i < child.size(); ++i) {
        const int j = parent.position_of(child.vertices[i]);
        require(j >= 0, "child vertex ", child.vertices[i], " missing from parent field");
        require(chi.child_pos_of_parent[j] < 0, "parent vertex ", child.vertices[i],
                " claimed twice");
        chi.parent_pos_of_child[i] = j;
        chi.child_pos_of_parent[j] = i;
    }
    return chi;
}

DenseTensor PromotionMatrix::to_matrix() const {
    DenseTensor m({child_size, parent_size});
    for (int i = 0; i < child_size; ++i) m.at({i, parent_pos_of_child[i]}) = 1.0;
    return m;
}

void NodeActivation::validate() const {
    require(!channels.empty(), "activation must carry at least one channel");
    const int k = channels[0].order();
    for (const auto& c : channels) {
        require(c.order() == k, "mixed channel orders in one activation");
        require(c.is_cubic() && (k == 0 || c.cubic_extent() == field.size()),
                "channel extent does not match field size ", field.size());
    }
}

void LayerParams::validate() const {
    const int s = contraction_count();
    require(s >= 1, "layer needs at least one contraction spec");
    for (const auto& spec : contractions) {
        require(spec.order_in == pre_contraction_order(), "contraction spec ", spec.to_string(),
                " expects order ", spec.order_in, ", layer produces order ",
                pre_contraction_order());
        require(spec.order_out() == order, "contraction spec ", spec.to_string(),
                " yields order ", spec.order_out(), ", layer activation order is ", order);
    }
    require(weight.order() == 2 && weight.shape()[0] == out_channels &&
                weight.shape()[1] == s * in_channels,
            "weight must be [", out_channels, " x ", s * in_channels, "]");
    require(bias.order() == 1 && bias.shape()[0] == out_channels, "bias must have length ",
            out_channels);
}

DenseTensor promote(const DenseTensor& child, const PromotionMatrix& chi) {
    require(child.is_cubic(), "promotion requires a cubic tensor");
    const int k = child.order();
    require(k == 0 || child.cubic_extent() == chi.child_size, "child extent ",
            child.cubic_extent(), " does not match chi child size ", chi.child_size);
    if (k == 0) return child;

    DenseTensor out(std::vector<int>(k, chi.parent_size));
    std::vector<int> pidx(k, 0);
    std::vector<int> cidx(k, 0);
    const auto shape = out.shape();
    index_t flat = 0;
    do {
        bool present = true;
        for (int d = 0; d < k && present; ++d) {
            cidx[d] = chi.child_pos_of_parent[pidx[d]];
            present = cidx[d] >= 0;
        }
        if (present) out[flat] = child.at(cidx);
        ++flat;
    } while (next_index(pidx, shape));
    return out;
}

DenseTensor stack(std::span<const DenseTensor> promoted, std::span<const int> slots,
                  int parent_size) {
    require(promoted.size() == slots.size(), "got ", promoted.size(), " tensors for ",
            slots.size(), " slots");
    std::vector<char> taken(parent_size, 0);
    int k = 0;
    for (size_t u = 0; u < promoted.size(); ++u) {
        const int j = slots[u];
        require(j >= 0 && j < parent_size, "slot ", j, " out of range");
        require(!taken[j], "two children claim slot ", j);
        taken[j] = 1;
        k = promoted[u].order();
        require(promoted[u].is_cubic() && (k == 0 || promoted[u].cubic_extent() == parent_size),
                "stacked tensor extent must equal parent field size ", parent_size);
    }
    for (const auto& t : promoted)
        require(t.order() == k, "stacked tensors must share one order");

    DenseTensor out(std::vector<int>(k + 1, parent_size));
    // out[..., j] = promoted[u] where slots[u] == j; zero elsewhere.
    for (size_t u = 0; u < promoted.size(); ++u) {
        const auto src = promoted[u].data();
        const index_t inner = promoted[u].size();
        for (index_t e = 0; e < inner; ++e) out[e * parent_size + slots[u]] = src[e];
    }
    return out;
}

DenseTensor adjacency_product(const DenseTensor& t, const DenseTensor& a_restricted) {
    require(a_restricted.order() == 2, "adjacency restriction must be order 2");
    require(t.is_cubic() && a_restricted.is_cubic(), "adjacency product requires cubic operands");
    require(t.order() == 0 || t.cubic_extent() == a_restricted.cubic_extent(),
            "extent mismatch: tensor ", t.cubic_extent(), " vs adjacency ",
            a_restricted.cubic_extent());
    return tensor_product(t, a_restricted);
}

} // namespace ccn
