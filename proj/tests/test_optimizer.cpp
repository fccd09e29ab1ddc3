#include <doctest.h>

#include <cmath>

#include "ccn/optimizer.hpp"
#include "ccn/random.hpp"

using namespace ccn;

namespace {

CcnModel tiny_model(std::uint64_t seed) {
    Architecture arch;
    arch.order = 1;
    arch.levels = 1;
    arch.use_adjacency = true;
    arch.in_channels = 2;
    arch.widths = {2};
    arch.contraction_cap = 25;  // all of (4,1): projections and deltas
    arch.out_dim = 2;
    return CcnModel::init(arch, seed);
}

} // namespace

TEST_CASE("sgd_step") {
    Architecture arch;
    arch.order = 0;
    arch.levels = 1;
    arch.use_adjacency = false;
    arch.in_channels = 1;
    arch.widths = {1};
    arch.contraction_cap = 1;
    arch.out_dim = 1;
    CcnModel model = CcnModel::init(arch, 3);

    SUBCASE("zero gradient and zero velocity leave parameters unchanged") {
        OptimizerState opt = OptimizerState::init(model, 0.9, 0.1, 1e-6, 0.0);
        std::vector<DenseTensor> grads;
        for (const auto& p : model.params()) grads.emplace_back(p.tensor->shape());
        const DenseTensor before = model.layers[0].weight;
        sgd_step(model.params(), grads, opt);
        CHECK(model.layers[0].weight == before);
    }
    SUBCASE("plain sgd: one step with lr 0.1 and unit gradient moves by -0.1") {
        OptimizerState opt = OptimizerState::init(model, 0.0, 0.1, 0.0, 0.0);
        model.layers[0].weight[0] = 0.0;
        std::vector<DenseTensor> grads;
        for (const auto& p : model.params()) grads.emplace_back(p.tensor->shape());
        grads[0][0] = 1.0;
        sgd_step(model.params(), grads, opt);
        CHECK(model.layers[0].weight[0] == doctest::Approx(-0.1));
    }
    SUBCASE("heavy ball accumulates velocity") {
        OptimizerState opt = OptimizerState::init(model, 0.5, 0.1, 0.0, 0.0);
        model.layers[0].weight[0] = 0.0;
        std::vector<DenseTensor> grads;
        for (const auto& p : model.params()) grads.emplace_back(p.tensor->shape());
        grads[0][0] = 1.0;
        sgd_step(model.params(), grads, opt);  // v = -0.1, p = -0.1
        sgd_step(model.params(), grads, opt);  // v = -0.15, p = -0.25
        CHECK(model.layers[0].weight[0] == doctest::Approx(-0.25));
        CHECK(opt.velocity[0][0] == doctest::Approx(-0.15));
    }
    SUBCASE("learning rate reaches lr_min after the predicted step count and stays") {
        const real_t lr0 = 1e-3, lr_min = 1e-6, decay = 1e-4;
        OptimizerState opt = OptimizerState::init(model, 0.9, lr0, lr_min, decay);
        std::vector<DenseTensor> grads;
        for (const auto& p : model.params()) grads.emplace_back(p.tensor->shape());
        const int steps = static_cast<int>(std::ceil((lr0 - lr_min) / decay));
        for (int s = 0; s < steps; ++s) {
            CHECK(opt.lr > lr_min);
            sgd_step(model.params(), grads, opt);
        }
        CHECK(opt.lr == lr_min);
        sgd_step(model.params(), grads, opt);
        CHECK(opt.lr == lr_min);
    }
    SUBCASE("lr below lr_min is rejected") {
        CHECK_THROWS_AS(OptimizerState::init(model, 0.9, 1e-7, 1e-6, 0.0), error);
    }
}

TEST_CASE("grad_check validates a small model end to end") {
    Rng rng(91);
    const Graph g = random_graph(rng, 5, 0.6, 2);
    const auto scheme = build_scheme(g, 1);
    CcnModel model = tiny_model(8);
    calibrate_init(model, {&g}, {&scheme}, {&g.labels});

    SUBCASE("all parameters pass at 1e-4") {
        const auto report = grad_check(model, g, scheme, g.labels, 0, 1e-4, 1e-6, 0);
        INFO("max rel err ", report.max_rel_error, " at ", report.worst_param);
        CHECK(report.pass);
        CHECK(report.checked > 0);
    }
    SUBCASE("a deliberately corrupted adjoint fails") {
        testing::set_corrupt_contract_adjoint(true);
        const auto report = grad_check(model, g, scheme, g.labels, 0, 1e-4, 1e-6, 0);
        testing::set_corrupt_contract_adjoint(false);
        CHECK_FALSE(report.pass);
    }
    SUBCASE("budget sampling touches every parameter tensor") {
        const auto report = grad_check(model, g, scheme, g.labels, 0, 1e-4, 1e-6, 12);
        CHECK(report.pass);
        CHECK(report.checked + report.kinks_skipped >= 4);  // at least one per tensor
        CHECK(report.checked + report.kinks_skipped < 40);
    }
}

TEST_CASE("zero-weight model has zero gradients everywhere") {
    Rng rng(92);
    const Graph g = random_graph(rng, 4, 0.5, 2);
    const auto scheme = build_scheme(g, 1);
    CcnModel model = tiny_model(9);
    for (auto& p : model.params())
        for (auto& v : p.tensor->data()) v = 0.0;
    // Constant loss: logits are identically zero regardless of parameters
    // upstream of the head, so only head gradients could be nonzero; with a
    // balanced softmax they cancel to +-1/2 on the bias alone.
    const auto grads = loss_gradients(model, g, scheme, g.labels, 0, nullptr);
    const auto params = model.params();
    for (size_t t = 0; t < params.size(); ++t) {
        if (params[t].name == "readout.bias") continue;
        for (index_t i = 0; i < grads[t].size(); ++i) CHECK(grads[t][i] == 0.0);
    }
}
