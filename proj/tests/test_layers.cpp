#include <doctest.h>

#include <cmath>

#include "ccn/model.hpp"
#include "ccn/random.hpp"

using namespace ccn;

namespace {

NodeActivation scalar_child(int vertex, real_t value) {
    NodeActivation a;
    a.vertex = vertex;
    a.field = ReceptiveField{{vertex}, 0};
    a.channels = {DenseTensor::scalar(value)};
    return a;
}

} // namespace

TEST_CASE("promotion matrix") {
    const ReceptiveField child{{2, 3}, 0};
    const ReceptiveField parent{{1, 2, 3}, 1};
    const PromotionMatrix chi = PromotionMatrix::build(child, parent);
    CHECK(chi.to_matrix() == DenseTensor({2, 3}, {0, 1, 0, 0, 0, 1}));
    CHECK(chi.chi(0, 1) == 1.0);
    CHECK(chi.chi(0, 0) == 0.0);

    // Every child vertex must appear in the parent.
    const ReceptiveField stranger{{9}, 0};
    CHECK_THROWS_AS(PromotionMatrix::build(stranger, parent), error);
}

TEST_CASE("promote") {
    const ReceptiveField child{{2, 3}, 0};
    const ReceptiveField parent{{1, 2, 3}, 1};
    const PromotionMatrix chi = PromotionMatrix::build(child, parent);
    SUBCASE("identity when fields coincide") {
        const PromotionMatrix self = PromotionMatrix::build(child, child);
        const DenseTensor f({2, 2}, {1, 2, 3, 4});
        CHECK(promote(f, self) == f);
    }
    SUBCASE("order-1 child [5,7] lands at parent positions of its vertices") {
        CHECK(promote(DenseTensor({2}, {5, 7}), chi) == DenseTensor({3}, {0, 5, 7}));
    }
    SUBCASE("order-0 passes through") {
        CHECK(promote(DenseTensor::scalar(4.5), chi) == DenseTensor::scalar(4.5));
    }
    SUBCASE("order-2 zero-pads absent rows and columns") {
        const DenseTensor f({2, 2}, {1, 2, 3, 4});
        CHECK(promote(f, chi) == DenseTensor({3, 3}, {0, 0, 0, 0, 1, 2, 0, 3, 4}));
    }
    SUBCASE("extent mismatch is an error") {
        CHECK_THROWS_AS(promote(DenseTensor({3}, {1, 2, 3}), chi), error);
    }
}

TEST_CASE("stack") {
    SUBCASE("single child in a size-1 parent") {
        const std::vector<DenseTensor> promoted = {DenseTensor::scalar(3.0)};
        const std::vector<int> slots = {0};
        CHECK(stack(promoted, slots, 1) == DenseTensor({1}, {3.0}));
    }
    SUBCASE("children at positions 0 and 2 of a 3-field") {
        const std::vector<DenseTensor> promoted = {DenseTensor::scalar(4.0),
                                                   DenseTensor::scalar(9.0)};
        const std::vector<int> slots = {0, 2};
        CHECK(stack(promoted, slots, 3) == DenseTensor({3}, {4, 0, 9}));
    }
    SUBCASE("order-1 slices fill the last axis") {
        const std::vector<DenseTensor> promoted = {DenseTensor({2}, {1, 2})};
        const std::vector<int> slots = {1};
        CHECK(stack(promoted, slots, 2) == DenseTensor({2, 2}, {0, 1, 0, 2}));
    }
    SUBCASE("two children claiming one slot is an error") {
        const std::vector<DenseTensor> promoted = {DenseTensor::scalar(1.0),
                                                   DenseTensor::scalar(2.0)};
        const std::vector<int> slots = {1, 1};
        CHECK_THROWS_AS(stack(promoted, slots, 3), error);
    }
}

TEST_CASE("adjacency product") {
    SUBCASE("zero restriction annihilates") {
        const DenseTensor t({2, 2}, {1, 2, 3, 4});
        const DenseTensor h = adjacency_product(t, DenseTensor({2, 2}));
        CHECK(h.order() == 4);
        for (index_t i = 0; i < h.size(); ++i) CHECK(h[i] == 0.0);
    }
    SUBCASE("order bookkeeping: order-3 stack times adjacency is order 5") {
        const DenseTensor t({2, 2, 2}, 1.0);
        const DenseTensor a({2, 2}, {0, 1, 1, 0});
        CHECK(adjacency_product(t, a).order() == 5);
    }
    SUBCASE("extent mismatch is an error") {
        CHECK_THROWS_AS(adjacency_product(DenseTensor({3, 3}), DenseTensor({2, 2})), error);
    }
}

TEST_CASE("aggregate, zeroth order") {
    // Children carrying scalars 1, 2, 3 with W = [[1]], b = 0 and identity
    // nonlinearity reduce to the plain neighbor sum: 6.
    LayerParams lp;
    lp.order = 0;
    lp.use_adjacency = false;
    lp.in_channels = 1;
    lp.out_channels = 1;
    lp.contractions = default_contraction_subset(1, 0, 10);
    lp.weight = DenseTensor({1, 1}, {1.0});
    lp.bias = DenseTensor({1}, {0.0});
    lp.relu = false;

    const ReceptiveField parent{{0, 1, 2}, 1};
    const std::vector<NodeActivation> children = {scalar_child(0, 1), scalar_child(1, 2),
                                                  scalar_child(2, 3)};
    const NodeActivation out = aggregate(parent, children, lp, DenseTensor({3, 3}));
    REQUIRE(out.channels.size() == 1);
    CHECK(out.channels[0] == DenseTensor::scalar(6.0));
}

TEST_CASE("aggregate, first order against hand-rolled matrix arithmetic") {
    // Parent field (0,1); both children promoted to full first-order vectors.
    Rng rng(77);
    LayerParams lp;
    lp.order = 1;
    lp.use_adjacency = false;
    lp.in_channels = 1;
    lp.out_channels = 2;
    lp.contractions = default_contraction_subset(2, 1, 10);
    REQUIRE(lp.contractions.size() == 2);
    lp.weight = DenseTensor({2, 2});
    for (auto& w : lp.weight.data()) w = rng.uniform(-1, 1);
    lp.bias = DenseTensor({2});
    for (auto& b : lp.bias.data()) b = rng.uniform(-1, 1);
    lp.relu = true;

    const ReceptiveField parent{{0, 1}, 1};
    std::vector<NodeActivation> children(2);
    for (int u = 0; u < 2; ++u) {
        children[u].vertex = u;
        children[u].field = parent;
        children[u].field.level = 0;
        DenseTensor v({2});
        v[0] = rng.uniform(-1, 1);
        v[1] = rng.uniform(-1, 1);
        children[u].channels = {v};
    }
    const NodeActivation out = aggregate(parent, children, lp, DenseTensor({2, 2}));

    // By hand: T holds the children as columns, Q0 = T^t 1 (column sums),
    // Q1 = T 1 (row sums), F(i) = relu(w[i][0] Q0 + w[i][1] Q1 + b_i 1).
    real_t t[2][2];
    for (int u = 0; u < 2; ++u)
        for (int r = 0; r < 2; ++r) t[r][u] = children[u].channels[0][r];
    for (int i = 0; i < 2; ++i) {
        for (int r = 0; r < 2; ++r) {
            const real_t q0 = t[0][r] + t[1][r];  // column sum r
            const real_t q1 = t[r][0] + t[r][1];  // row sum r
            real_t expect = lp.bias[i] + lp.weight.at({i, 0}) * q0 + lp.weight.at({i, 1}) * q1;
            expect = std::max<real_t>(expect, 0);
            CHECK(out.channels[i][r] == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("aggregate rejects incompatible contraction specs") {
    LayerParams lp;
    lp.order = 1;
    lp.use_adjacency = false;
    lp.in_channels = 1;
    lp.out_channels = 1;
    lp.contractions = default_contraction_subset(5, 2, 10);  // wrong shape for this layer
    lp.weight = DenseTensor({1, 10});
    lp.bias = DenseTensor({1});
    const ReceptiveField parent{{0}, 1};
    NodeActivation child;
    child.vertex = 0;
    child.field = ReceptiveField{{0}, 0};
    child.channels = {DenseTensor({1}, {1.0})};
    CHECK_THROWS_AS(aggregate(parent, {child}, lp, DenseTensor({1, 1})), error);
}

TEST_CASE("readout") {
    SUBCASE("all-zero activations yield the bias vector") {
        NodeActivation a;
        a.vertex = 0;
        a.field = ReceptiveField{{0, 1}, 1};
        a.channels = {DenseTensor({2, 2}), DenseTensor({2, 2})};
        ReadoutParams head;
        head.weight = DenseTensor({3, 2}, {1, 2, 3, 4, 5, 6});
        head.bias = DenseTensor({3}, {7, 8, 9});
        CHECK(readout({a}, head) == std::vector<real_t>{7, 8, 9});
    }
    SUBCASE("single vertex, order-2 channel, identity map gives the grand sum") {
        NodeActivation a;
        a.vertex = 0;
        a.field = ReceptiveField{{0, 1}, 1};
        a.channels = {DenseTensor({2, 2}, {1, 2, 3, 4})};
        ReadoutParams head;
        head.weight = DenseTensor({1, 1}, {1.0});
        head.bias = DenseTensor({1}, {0.0});
        CHECK(readout({a}, head) == std::vector<real_t>{10});
    }
    SUBCASE("invariant to the listing order of the vertices") {
        Rng rng(78);
        std::vector<NodeActivation> acts;
        for (int v = 0; v < 4; ++v) {
            NodeActivation a;
            a.vertex = v;
            a.field = ReceptiveField{{v}, 1};
            DenseTensor t({1, 1});
            t[0] = rng.uniform(-1, 1);
            a.channels = {t};
            acts.push_back(a);
        }
        ReadoutParams head;
        head.weight = DenseTensor({2, 1}, {1.5, -0.5});
        head.bias = DenseTensor({2}, {0.25, 0.5});
        const auto base = readout(acts, head);
        std::vector<NodeActivation> reversed(acts.rbegin(), acts.rend());
        const auto flipped = readout(reversed, head);
        for (size_t i = 0; i < base.size(); ++i)
            CHECK(base[i] == doctest::Approx(flipped[i]).epsilon(1e-14));
    }
}

TEST_CASE("first-order channel widths double per level when mixing is square") {
    Architecture arch;
    arch.order = 1;
    arch.levels = 3;
    arch.use_adjacency = false;
    arch.in_channels = 1;
    arch.widths = {2, 4, 8};
    arch.contraction_cap = 10;
    arch.out_dim = 2;
    const CcnModel model = CcnModel::init(arch, 1);
    // Two contractions of a matrix to a vector; with one input channel the
    // level-1 mix is 2x2, then 4x4, then 8x8.
    CHECK(model.layers[0].contraction_count() == 2);
    CHECK(model.layers[0].weight.shape() == std::vector<int>{2, 2});
    CHECK(model.layers[1].weight.shape() == std::vector<int>{4, 4});
    CHECK(model.layers[2].weight.shape() == std::vector<int>{8, 8});

    Rng rng(79);
    const Graph g = random_graph(rng, 5, 0.5, 1);
    const auto phi = forward(g, build_scheme(g, 3), model, g.labels);
    CHECK(phi.size() == 2);
}

TEST_CASE("activation validation") {
    NodeActivation a;
    a.vertex = 0;
    a.field = ReceptiveField{{0, 1}, 1};
    CHECK_THROWS_AS(a.validate(), error);  // no channels
    a.channels = {DenseTensor({2, 2}), DenseTensor({3, 3})};
    CHECK_THROWS_AS(a.validate(), error);  // extent mismatch
    a.channels = {DenseTensor({2, 2}), DenseTensor({2})};
    CHECK_THROWS_AS(a.validate(), error);  // mixed orders
    a.channels = {DenseTensor({2, 2})};
    a.validate();
}
