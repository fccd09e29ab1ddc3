#include <doctest.h>

#include <cmath>
#include <functional>

#include "ccn/random.hpp"
#include "ccn/tape.hpp"

using namespace ccn;

namespace {

// Finite-difference check of d(scalar program)/d(inputs) for a tape program
// rebuilt from scratch at every evaluation. Inputs are leaves; the program
// must end in a scalar node.
void fd_check(std::vector<DenseTensor> inputs,
              const std::function<Tape::NodeId(Tape&, const std::vector<Tape::NodeId>&)>& program,
              real_t tol = 1e-6, real_t h = 1e-6) {
    auto eval = [&](const std::vector<DenseTensor>& values) {
        Tape tape;
        std::vector<Tape::NodeId> ids;
        for (const auto& v : values) ids.push_back(tape.leaf(v, true));
        const Tape::NodeId out = program(tape, ids);
        REQUIRE(tape.value(out).order() == 0);
        return tape.value(out)[0];
    };

    Tape tape;
    std::vector<Tape::NodeId> ids;
    for (const auto& v : inputs) ids.push_back(tape.leaf(v, true));
    const Tape::NodeId out = program(tape, ids);
    tape.backward(out);

    for (size_t t = 0; t < inputs.size(); ++t) {
        REQUIRE(tape.has_grad(ids[t]));
        const DenseTensor& analytic = tape.grad(ids[t]);
        for (index_t i = 0; i < inputs[t].size(); ++i) {
            auto plus = inputs;
            auto minus = inputs;
            plus[t][i] += h;
            minus[t][i] -= h;
            const real_t numeric = (eval(plus) - eval(minus)) / (2 * h);
            const real_t rel = std::abs(analytic[i] - numeric) /
                               std::max({real_t(1), std::abs(analytic[i]), std::abs(numeric)});
            CHECK(rel < tol);
        }
    }
}

Tape::NodeId sum_all(Tape& tape, Tape::NodeId id) {
    const int k = tape.value(id).order();
    if (k == 0) return id;
    std::vector<int> dims(k);
    for (int d = 0; d < k; ++d) dims[d] = d;
    return tape.project(id, dims);
}

DenseTensor rand_tensor(Rng& rng, std::vector<int> shape) {
    DenseTensor t(std::move(shape));
    for (auto& v : t.data()) v = rng.uniform(-1, 1);
    return t;
}

} // namespace

TEST_CASE("simple adjoints") {
    SUBCASE("loss = sum(T) has an all-ones gradient") {
        Tape tape;
        const auto x = tape.leaf(DenseTensor({2, 3}, {1, 2, 3, 4, 5, 6}), true);
        tape.backward(sum_all(tape, x));
        CHECK(tape.grad(x) == DenseTensor({2, 3}, 1.0));
    }
    SUBCASE("loss = trace(T) has the identity as gradient") {
        Tape tape;
        const auto x = tape.leaf(DenseTensor({2, 2}, {1, 2, 3, 4}), true);
        tape.backward(tape.contract(x, ContractionSpec{2, {{0, 1}}}));
        CHECK(tape.grad(x) == DenseTensor({2, 2}, {1, 0, 0, 1}));
    }
    SUBCASE("backward needs a scalar and runs once") {
        Tape tape;
        const auto x = tape.leaf(DenseTensor({2}, {1, 2}), true);
        CHECK_THROWS_AS(tape.backward(x), error);
        Tape tape2;
        const auto y = tape2.leaf(DenseTensor({2}, {1, 2}), true);
        const auto s = sum_all(tape2, y);
        tape2.backward(s);
        CHECK_THROWS_AS(tape2.backward(s), error);
    }
}

TEST_CASE("finite differences validate every operation adjoint") {
    Rng rng(55);
    SUBCASE("tensor product") {
        fd_check({rand_tensor(rng, {2, 3}), rand_tensor(rng, {3})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     return sum_all(t, t.tensor_product(in[0], in[1]));
                 });
    }
    SUBCASE("elementwise product") {
        fd_check({rand_tensor(rng, {3, 2}), rand_tensor(rng, {2})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     // Weighted reduction so the gradient is not constant.
                     const auto prod = t.elementwise_product(in[0], in[1], {1});
                     const auto sq = t.elementwise_product(prod, prod, {0, 1});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("projection") {
        fd_check({rand_tensor(rng, {3, 2, 2})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto p = t.project(in[0], {1});
                     const auto sq = t.elementwise_product(p, p, {0, 1});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("generalized contraction with a delta group") {
        fd_check({rand_tensor(rng, {3, 3, 3})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto c = t.contract(in[0], ContractionSpec{3, {{0, 2}}});
                     const auto sq = t.elementwise_product(c, c, {0});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("promotion") {
        const ReceptiveField child{{4, 1}, 0};
        const ReceptiveField parent{{1, 2, 4}, 1};
        const PromotionMatrix chi = PromotionMatrix::build(child, parent);
        fd_check({rand_tensor(rng, {2, 2})},
                 [chi](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto p = t.promote(in[0], chi);
                     const auto sq = t.elementwise_product(p, p, {0, 1});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("stacking") {
        fd_check({rand_tensor(rng, {3}), rand_tensor(rng, {3})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto s = t.stack({in[0], in[1]}, {2, 0}, 3);
                     const auto sq = t.elementwise_product(s, s, {0, 1});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("linear combination") {
        fd_check({rand_tensor(rng, {4}), rand_tensor(rng, {4})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto l = t.linear_combination({in[0], in[1]}, {2.0, -0.5});
                     const auto sq = t.elementwise_product(l, l, {0});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("channel mix including weight and bias gradients") {
        fd_check({rand_tensor(rng, {2, 2}), rand_tensor(rng, {2, 2}), rand_tensor(rng, {3, 2}),
                  rand_tensor(rng, {3})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto m = t.mix({in[0], in[1]}, in[2], in[3]);
                     const auto sq = t.elementwise_product(m, m, {0, 1, 2});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("channel slice") {
        fd_check({rand_tensor(rng, {3, 2})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     const auto s = t.channel_slice(in[0], 1);
                     const auto sq = t.elementwise_product(s, s, {0});
                     return sum_all(t, sq);
                 });
    }
    SUBCASE("relu away from the kink") {
        fd_check({DenseTensor({4}, {-0.7, 0.4, -0.2, 0.9})},
                 [](Tape& t, const std::vector<Tape::NodeId>& in) {
                     return sum_all(t, t.relu(in[0]));
                 });
    }
    SUBCASE("softmax cross entropy") {
        fd_check({rand_tensor(rng, {4})}, [](Tape& t, const std::vector<Tape::NodeId>& in) {
            return t.softmax_cross_entropy(in[0], 2);
        });
    }
    SUBCASE("mean squared error") {
        fd_check({rand_tensor(rng, {3})}, [](Tape& t, const std::vector<Tape::NodeId>& in) {
            return t.mse(in[0], {0.3, -0.4, 0.8});
        });
    }
}

TEST_CASE("relu subgradient at zero is zero") {
    Tape tape;
    const auto x = tape.leaf(DenseTensor({3}, {0.0, -1.0, 2.0}), true);
    tape.backward(sum_all(tape, tape.relu(x)));
    CHECK(tape.grad(x) == DenseTensor({3}, {0, 0, 1}));
}

TEST_CASE("backward is deterministic") {
    Rng rng(56);
    const DenseTensor a = rand_tensor(rng, {3, 3});
    auto run = [&] {
        Tape tape;
        const auto x = tape.leaf(a, true);
        const auto c = tape.contract(x, ContractionSpec{2, {{0, 1}}});
        const auto l = tape.linear_combination({c, c}, {1.0, 2.5});
        tape.backward(l);
        return tape.grad(x);
    };
    CHECK(run() == run());
}

TEST_CASE("corrupted contract adjoint is caught by finite differences") {
    testing::set_corrupt_contract_adjoint(true);
    Tape tape;
    const auto x = tape.leaf(DenseTensor({2, 2}, {1, 2, 3, 4}), true);
    tape.backward(tape.contract(x, ContractionSpec{2, {{0, 1}}}));
    const DenseTensor g = tape.grad(x);
    testing::set_corrupt_contract_adjoint(false);
    CHECK(g == DenseTensor({2, 2}, {-1, 0, 0, -1}));  // sign flipped
}

TEST_CASE("gradients do not flow into constant leaves") {
    Tape tape;
    const auto x = tape.leaf(DenseTensor({2}, {1, 2}), true);
    const auto c = tape.leaf(DenseTensor({2}, {5, 5}), false);
    const auto p = tape.elementwise_product(x, c, {0});
    tape.backward(sum_all(tape, p));
    CHECK(tape.has_grad(x));
    CHECK_FALSE(tape.has_grad(c));
}
