#include "ccn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>

#include "ccn/optimizer.hpp"
#include "ccn/random.hpp"
#include "ccn/tape.hpp"

namespace ccn::verify {

namespace {

DenseTensor random_tensor(Rng& rng, const std::vector<int>& shape, bool integers = false) {
    DenseTensor t(shape);
    for (auto& v : t.data())
        v = integers ? static_cast<real_t>(rng.uniform_int(-3, 3))
                     : static_cast<real_t>(rng.uniform(-1.0, 1.0));
    return t;
}

real_t max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
    if (!a.same_shape(b)) return std::numeric_limits<real_t>::infinity();
    real_t worst = 0;
    for (index_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

ReceptiveField reorder_field(const ReceptiveField& f, const Permutation& pi) {
    ReceptiveField out;
    out.level = f.level;
    out.vertices.resize(f.size());
    for (int a = 0; a < f.size(); ++a) out.vertices[pi(a)] = f.vertices[a];
    return out;
}

CheckResult pass(const std::string& name) { return {name, true, ""}; }

CheckResult check_scheme_invariance(Level level) {
    const std::string name = "scheme-invariance";
    Rng rng(11);
    const int max_exhaustive = 5;
    for (int n = 2; n <= (level == Level::full ? 8 : max_exhaustive); ++n) {
        for (int rep = 0; rep < 3; ++rep) {
            const Graph g = random_graph(rng, n, 0.4, 2);
            const auto s1 = build_scheme(g, 2);
            std::vector<Permutation> perms;
            if (n <= max_exhaustive)
                perms = all_permutations(n);
            else
                for (int t = 0; t < 30; ++t) perms.push_back(rng.permutation(n));
            for (const auto& sigma : perms) {
                const auto s2 = build_scheme(permute_graph(g, sigma), 2);
                if (!scheme_isomorphism_check(s1, s2, sigma))
                    return {name, false,
                            concat("n=", n, " rep=", rep, ": permuted scheme not isomorphic")};
            }
        }
    }
    return pass(name);
}

CheckResult check_restriction_covariance(Level level) {
    const std::string name = "restriction-covariance";
    Rng rng(12);
    const int reps = level == Level::full ? 40 : 15;
    for (int rep = 0; rep < reps; ++rep) {
        const int n = rng.uniform_int(3, 7);
        const Graph g = random_graph(rng, n, 0.5, 2);
        const int m = rng.uniform_int(2, std::min(n, 4));
        ReceptiveField field;
        field.level = 1;
        const auto order = rng.shuffled_indices(n);
        field.vertices.assign(order.begin(), order.begin() + m);
        const DenseTensor base = restrict_adjacency(g, field);
        for (const auto& pi : all_permutations(m)) {
            const DenseTensor reordered = restrict_adjacency(g, reorder_field(field, pi));
            if (!(reordered == permute_action(base, pi)))
                return {name, false, concat("rep=", rep, ": restriction is not a P-tensor")};
        }
    }
    return pass(name);
}

CheckResult check_operation_covariance(Level level) {
    const std::string name = "operation-covariance";
    const real_t tol = 1e-12;
    Rng rng(13);
    const int reps = level == Level::full ? 12 : 6;
    for (int m = 2; m <= 4; ++m) {
        const auto perms = all_permutations(m);
        for (int rep = 0; rep < reps; ++rep) {
            const int ka = rng.uniform_int(1, 3);
            const int kb = rng.uniform_int(1, std::min(ka, 2));
            const DenseTensor a = random_tensor(rng, std::vector<int>(ka, m));
            const DenseTensor a2 = random_tensor(rng, std::vector<int>(ka, m));
            const DenseTensor b = random_tensor(rng, std::vector<int>(kb, m));

            std::vector<int> dims;  // kb distinct dims of a
            for (int d : rng.shuffled_indices(ka)) {
                if (static_cast<int>(dims.size()) == kb) break;
                dims.push_back(d);
            }
            const int r = rng.uniform_int(0, ka - 1);
            const auto specs = enumerate_contractions(ka, r);
            const auto& spec = specs[rng.uniform_int(0, static_cast<int>(specs.size()) - 1)];
            const real_t alpha = rng.uniform(-2, 2), beta = rng.uniform(-2, 2);
            const std::vector<real_t> coeffs = {alpha, beta};

            for (const auto& pi : perms) {
                const DenseTensor pa = permute_action(a, pi);
                const DenseTensor pa2 = permute_action(a2, pi);
                const DenseTensor pb = permute_action(b, pi);
                if (max_abs_diff(permute_action(tensor_product(a, b), pi),
                                 tensor_product(pa, pb)) > tol)
                    return {name, false, concat("tensor_product breaks covariance at m=", m)};
                if (max_abs_diff(permute_action(elementwise_product(a, b, dims), pi),
                                 elementwise_product(pa, pb, dims)) > tol)
                    return {name, false, concat("elementwise_product breaks covariance at m=", m)};
                if (max_abs_diff(permute_action(project(a, dims), pi), project(pa, dims)) > tol)
                    return {name, false, concat("project breaks covariance at m=", m)};
                if (max_abs_diff(permute_action(contract(a, spec), pi), contract(pa, spec)) > tol)
                    return {name, false,
                            concat("contract ", spec.to_string(), " breaks covariance at m=", m)};
                const std::vector<DenseTensor> ts = {a, a2};
                const std::vector<DenseTensor> pts = {pa, pa2};
                if (max_abs_diff(permute_action(linear_combination(ts, coeffs), pi),
                                 linear_combination(pts, coeffs)) > tol)
                    return {name, false, concat("linear_combination breaks covariance at m=", m)};
            }
        }
    }
    return pass(name);
}

CheckResult check_representation_property(Level level) {
    const std::string name = "representation-property";
    Rng rng(14);
    const int reps = level == Level::full ? 6 : 3;
    for (int m = 2; m <= 4; ++m) {
        const auto perms = all_permutations(m);
        for (int rep = 0; rep < reps; ++rep) {
            const int k = rng.uniform_int(1, 3);
            const DenseTensor t = random_tensor(rng, std::vector<int>(k, m));
            for (const auto& p1 : perms)
                for (const auto& p2 : perms) {
                    const DenseTensor two_step = permute_action(permute_action(t, p1), p2);
                    const DenseTensor one_step = permute_action(t, compose(p2, p1));
                    if (!(two_step == one_step))
                        return {name, false, concat("R_(p2 p1) != R_p2 R_p1 at m=", m, " k=", k)};
                }
        }
    }
    return pass(name);
}

CheckResult check_kron_equivalence(Level level) {
    const std::string name = "kron-equivalence";
    Rng rng(15);
    const int reps = level == Level::full ? 8 : 4;
    for (int m = 1; m <= 4; ++m) {
        for (const auto& pi : all_permutations(m)) {
            for (int rep = 0; rep < reps; ++rep) {
                const DenseTensor f = random_tensor(rng, {m * m});
                const DenseTensor matrix({m, m},
                                         std::vector<real_t>(f.data().begin(), f.data().end()));
                const DenseTensor via_kron = kron_action_order2(f, pi);
                const DenseTensor via_action = permute_action(matrix, pi);
                // Third route: explicit P * F * P^T.
                DenseTensor p({m, m});
                for (int j = 0; j < m; ++j) p.at({pi(j), j}) = 1.0;
                DenseTensor pf({m, m});
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        real_t acc = 0;
                        for (int k = 0; k < m; ++k) acc += p.at({i, k}) * matrix.at({k, j});
                        pf.at({i, j}) = acc;
                    }
                DenseTensor pfpt({m, m});
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        real_t acc = 0;
                        for (int k = 0; k < m; ++k) acc += pf.at({i, k}) * p.at({j, k});
                        pfpt.at({i, j}) = acc;
                    }
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        const real_t k_entry = via_kron[static_cast<index_t>(i) * m + j];
                        if (k_entry != via_action.at({i, j}) || k_entry != pfpt.at({i, j}))
                            return {name, false, concat("mismatch at m=", m, " entry (", i, ",",
                                                        j, ")")};
                    }
            }
        }
    }
    return pass(name);
}

CheckResult check_promotion_covariance(Level level) {
    const std::string name = "promotion-covariance";
    Rng rng(16);
    const int reps = level == Level::full ? 60 : 25;
    for (int rep = 0; rep < reps; ++rep) {
        const int mp = rng.uniform_int(2, 4);
        const int mc = rng.uniform_int(1, mp);
        ReceptiveField parent;
        parent.level = 1;
        parent.vertices = rng.shuffled_indices(mp + 2);
        parent.vertices.resize(mp);
        ReceptiveField child;
        child.level = 0;
        for (int i : rng.shuffled_indices(mp)) {
            if (child.size() == mc) break;
            child.vertices.push_back(parent.vertices[i]);
        }
        const int k = rng.uniform_int(0, 2);
        const DenseTensor f = random_tensor(rng, std::vector<int>(k, mc), true);
        const DenseTensor promoted = promote(f, PromotionMatrix::build(child, parent));
        for (const auto& pi : all_permutations(mp)) {
            const ReceptiveField parent2 = reorder_field(parent, pi);
            const DenseTensor promoted2 = promote(f, PromotionMatrix::build(child, parent2));
            if (!(promoted2 == permute_action(promoted, pi)))
                return {name, false, concat("rep=", rep, ": promotion breaks covariance")};
        }
    }
    return pass(name);
}

CheckResult check_stacking_covariance(Level level) {
    const std::string name = "stacking-covariance";
    Rng rng(17);
    const int reps = level == Level::full ? 60 : 25;
    for (int rep = 0; rep < reps; ++rep) {
        const int mp = rng.uniform_int(2, 4);
        ReceptiveField parent;
        parent.level = 1;
        parent.vertices = rng.shuffled_indices(mp + 1);
        parent.vertices.resize(mp);
        const int k = rng.uniform_int(0, 2);
        const int num_children = rng.uniform_int(1, mp);
        // Children occupy distinct parent positions and are promoted already.
        std::vector<DenseTensor> promoted;
        std::vector<int> child_positions;
        for (int i : rng.shuffled_indices(mp)) {
            if (static_cast<int>(promoted.size()) == num_children) break;
            child_positions.push_back(i);
            promoted.push_back(random_tensor(rng, std::vector<int>(k, mp), true));
        }
        const DenseTensor stacked = stack(promoted, child_positions, mp);
        for (const auto& pi : all_permutations(mp)) {
            std::vector<DenseTensor> promoted2;
            std::vector<int> positions2;
            for (size_t u = 0; u < promoted.size(); ++u) {
                promoted2.push_back(permute_action(promoted[u], pi));
                positions2.push_back(pi(child_positions[u]));
            }
            const DenseTensor stacked2 = stack(promoted2, positions2, mp);
            if (!(stacked2 == permute_action(stacked, pi)))
                return {name, false, concat("rep=", rep, ": stacking breaks covariance")};
        }
    }
    return pass(name);
}

CheckResult check_adjacency_product_covariance(Level level) {
    const std::string name = "adjacency-product-covariance";
    Rng rng(18);
    const int reps = level == Level::full ? 60 : 25;
    for (int rep = 0; rep < reps; ++rep) {
        const int m = rng.uniform_int(2, 4);
        const int k = rng.uniform_int(0, 2);
        const DenseTensor t = random_tensor(rng, std::vector<int>(k + 1, m), true);
        DenseTensor a({m, m});
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                a.at({i, j}) = a.at({j, i}) = static_cast<real_t>(rng.uniform_int(0, 1));
        const DenseTensor h = adjacency_product(t, a);
        for (const auto& pi : all_permutations(m)) {
            const DenseTensor h2 = adjacency_product(permute_action(t, pi), permute_action(a, pi));
            if (!(h2 == permute_action(h, pi)))
                return {name, false, concat("rep=", rep, ": adjacency product breaks covariance")};
        }
    }
    return pass(name);
}

LayerParams integer_layer(Rng& rng, int order, bool use_adjacency, int in_channels,
                          int out_channels, int cap) {
    LayerParams lp;
    lp.order = order;
    lp.use_adjacency = use_adjacency;
    lp.in_channels = in_channels;
    lp.out_channels = out_channels;
    lp.contractions = default_contraction_subset(order + 1 + (use_adjacency ? 2 : 0), order, cap);
    lp.weight = random_tensor(rng, {out_channels, lp.contraction_count() * in_channels}, true);
    lp.bias = random_tensor(rng, {out_channels}, true);
    return lp;
}

CheckResult check_aggregate_covariance(Level level) {
    const std::string name = "aggregate-covariance";
    Rng rng(19);
    const int reps = level == Level::full ? 30 : 12;
    for (int rep = 0; rep < reps; ++rep) {
        const int mp = rng.uniform_int(2, 4);
        ReceptiveField parent;
        parent.level = 1;
        parent.vertices = rng.shuffled_indices(mp);
        const int order = rng.uniform_int(0, 2);
        const bool use_adjacency = rng.uniform_int(0, 1) == 1;
        const int in_channels = rng.uniform_int(1, 2);
        const LayerParams lp = integer_layer(rng, order, use_adjacency, in_channels, 2, 12);

        const int num_children = rng.uniform_int(1, mp);
        std::vector<NodeActivation> children;
        for (int i : rng.shuffled_indices(mp)) {
            if (static_cast<int>(children.size()) == num_children) break;
            NodeActivation child;
            child.vertex = parent.vertices[i];
            const int field_size = rng.uniform_int(1, mp);
            child.field.level = 0;
            for (int j : rng.shuffled_indices(mp)) {
                if (child.field.size() == field_size) break;
                child.field.vertices.push_back(parent.vertices[j]);
            }
            if (child.field.position_of(child.vertex) < 0)
                child.field.vertices[0] = child.vertex;
            for (int c = 0; c < in_channels; ++c)
                child.channels.push_back(
                    random_tensor(rng, std::vector<int>(order, child.field.size()), true));
            children.push_back(std::move(child));
        }
        DenseTensor a({mp, mp});
        for (int i = 0; i < mp; ++i)
            for (int j = i + 1; j < mp; ++j)
                a.at({i, j}) = a.at({j, i}) = static_cast<real_t>(rng.uniform_int(0, 1));

        const NodeActivation base = aggregate(parent, children, lp, a);
        for (const auto& pi : all_permutations(mp)) {
            const NodeActivation turned =
                aggregate(reorder_field(parent, pi), children, lp, permute_action(a, pi));
            for (size_t c = 0; c < base.channels.size(); ++c)
                if (!(turned.channels[c] == permute_action(base.channels[c], pi)))
                    return {name, false,
                            concat("rep=", rep, " channel=", c, ": aggregate breaks Eq.1")};
        }
    }
    return pass(name);
}

Architecture small_arch(int order, bool adjacency, int in_channels, int out_dim) {
    Architecture arch;
    arch.order = order;
    arch.levels = 2;
    arch.use_adjacency = adjacency;
    arch.in_channels = in_channels;
    arch.widths = {2, 3};
    arch.contraction_cap = 10;
    arch.out_dim = out_dim;
    return arch;
}

CheckResult check_forward_invariance(Level level) {
    const std::string name = "forward-invariance";
    Rng rng(20);
    const real_t tol = 1e-10;
    const int d = 3;
    std::vector<Architecture> archs;
    for (int order = 0; order <= 2; ++order)
        for (int adjacency = 0; adjacency <= 1; ++adjacency)
            archs.push_back(small_arch(order, adjacency == 1, d, 2));

    const int max_n = level == Level::full ? 8 : 5;
    for (int n = 3; n <= max_n; ++n) {
        for (int rep = 0; rep < 2; ++rep) {
            const Graph g = random_graph(rng, n, 0.45, d);
            const auto scheme = build_scheme(g, 2);
            std::vector<Permutation> perms;
            if (n <= 5)
                perms = all_permutations(n);
            else
                for (int t = 0; t < 30; ++t) perms.push_back(rng.permutation(n));
            for (size_t ai = 0; ai < archs.size(); ++ai) {
                const CcnModel model = CcnModel::init(archs[ai], 100 + ai);
                const auto phi = forward(g, scheme, model, g.labels);
                for (const auto& sigma : perms) {
                    const Graph pg = permute_graph(g, sigma);
                    const auto phi2 = forward(pg, build_scheme(pg, 2), model, pg.labels);
                    for (size_t c = 0; c < phi.size(); ++c)
                        if (std::abs(phi[c] - phi2[c]) > tol)
                            return {name, false,
                                    concat("n=", n, " arch=", ai, ": |phi - phi'| = ",
                                           std::abs(phi[c] - phi2[c]))};
                }
            }
        }
    }
    return pass(name);
}

CheckResult check_zeroth_order_oracle(Level level) {
    const std::string name = "zeroth-order-oracle";
    Rng rng(21);
    const int reps = level == Level::full ? 100 : 30;
    for (int rep = 0; rep < reps; ++rep) {
        const int n = rng.uniform_int(2, 7);
        const int d = rng.uniform_int(2, 3);
        const Graph g = random_graph(rng, n, 0.5, d);
        Architecture arch = small_arch(0, false, d, 2);
        arch.widths = {3, 6};
        const CcnModel model = CcnModel::init(arch, 400 + rep);
        const auto via_tensors = forward(g, build_scheme(g, 2), model, g.labels);
        const auto via_loops = zeroth_order_reference(g, model, g.labels);
        for (size_t c = 0; c < via_tensors.size(); ++c)
            if (std::abs(via_tensors[c] - via_loops[c]) > 1e-12)
                return {name, false, concat("rep=", rep, ": |tensor - loop| = ",
                                            std::abs(via_tensors[c] - via_loops[c]))};
    }
    return pass(name);
}

CheckResult check_contraction_catalog(Level) {
    const std::string name = "contraction-catalog";
    const auto specs = enumerate_contractions(5, 2);
    if (specs.size() != 50)
        return {name, false, concat("(5,2) yields ", specs.size(), " specs, expected 50")};
    int n111 = 0, n12 = 0, n3 = 0;
    for (size_t i = 0; i < specs.size(); ++i) {
        specs[i].validate();
        if (specs[i].order_out() != 2) return {name, false, "spec with wrong output order"};
        for (size_t j = i + 1; j < specs.size(); ++j)
            if (specs[i] == specs[j]) return {name, false, "duplicate specs in catalog"};
        const auto tag = specs[i].case_tag();
        if (tag == "1+1+1")
            ++n111;
        else if (tag == "1+2")
            ++n12;
        else if (tag == "3")
            ++n3;
    }
    if (n111 != 10 || n12 != 30 || n3 != 10)
        return {name, false, concat("case counts ", n111, "/", n12, "/", n3, ", expected 10/30/10")};
    if (enumerate_contractions(3, 2).size() != 3) return {name, false, "(3,2) must yield 3 specs"};
    if (enumerate_contractions(2, 1).size() != 2) return {name, false, "(2,1) must yield 2 specs"};
    bool threw = false;
    try {
        enumerate_contractions(2, 2);
    } catch (const error&) {
        threw = true;
    }
    if (!threw) return {name, false, "(2,2) must be rejected"};
    return pass(name);
}

CheckResult check_gradients(Level level) {
    const std::string name = "gradient-check";
    if (std::getenv("CCN_CORRUPT_ADJOINT")) testing::set_corrupt_contract_adjoint(true);
    Rng rng(22);
    const int reps = level == Level::full ? 4 : 2;
    CheckResult failure{name, false, ""};
    bool failed = false;
    for (int rep = 0; rep < reps && !failed; ++rep) {
        const int d = 2;
        const Graph g = random_graph(rng, 6, 0.5, d);
        const auto scheme = build_scheme(g, 2);
        for (int order = 0; order <= 2 && !failed; ++order) {
            Architecture arch = small_arch(order, true, d, 2);
            arch.contraction_cap = 15;  // include non-projection contractions
            CcnModel model = CcnModel::init(arch, 700 + rep);
            calibrate_init(model, {&g}, {&scheme}, {&g.labels});
            const auto report =
                grad_check(model, g, scheme, g.labels, /*target=*/rep % 2, 1e-4, 1e-6, 0);
            if (!report.pass) {
                failure.detail = concat("order=", order, ": max rel err ", report.max_rel_error,
                                        " at ", report.worst_param, "[", report.worst_index, "]");
                failed = true;
            }
        }
    }
    testing::set_corrupt_contract_adjoint(false);
    return failed ? failure : pass(name);
}

CheckResult check_gradient_invariance(Level level) {
    const std::string name = "gradient-invariance";
    Rng rng(23);
    const real_t tol = 1e-10;
    const int reps = level == Level::full ? 6 : 3;
    for (int rep = 0; rep < reps; ++rep) {
        const int d = 2;
        const Graph g = random_graph(rng, 5, 0.5, d);
        const CcnModel model = CcnModel::init(small_arch(2, true, d, 2), 900 + rep);
        const auto base =
            loss_gradients(model, g, build_scheme(g, 2), g.labels, /*target=*/0, nullptr);
        for (int t = 0; t < 3; ++t) {
            const Permutation sigma = rng.permutation(g.n);
            const Graph pg = permute_graph(g, sigma);
            const auto turned =
                loss_gradients(model, pg, build_scheme(pg, 2), pg.labels, 0, nullptr);
            for (size_t p = 0; p < base.size(); ++p)
                if (max_abs_diff(base[p], turned[p]) > tol)
                    return {name, false,
                            concat("rep=", rep, ": gradient differs by ",
                                   max_abs_diff(base[p], turned[p]), " under relabeling")};
        }
    }
    return pass(name);
}

} // namespace

std::vector<real_t> zeroth_order_reference(const Graph& g, const CcnModel& model,
                                           const FeatureMatrix& features) {
    require(model.arch.order == 0 && !model.arch.use_adjacency,
            "reference path covers the zeroth-order, adjacency-free configuration");
    std::vector<std::vector<real_t>> f(g.n);
    for (int i = 0; i < g.n; ++i)
        f[i].assign(features[i].begin(), features[i].end());

    for (const auto& lp : model.layers) {
        require(lp.contraction_count() == 1, "zeroth-order layer must have the single sum spec");
        std::vector<std::vector<real_t>> next(g.n, std::vector<real_t>(lp.out_channels, 0.0));
        for (int i = 0; i < g.n; ++i) {
            std::vector<real_t> sums(lp.in_channels, 0.0);
            for (int j = 0; j < g.n; ++j)
                if (j == i || g.adj(i, j) != 0.0)
                    for (int c = 0; c < lp.in_channels; ++c) sums[c] += f[j][c];
            for (int o = 0; o < lp.out_channels; ++o) {
                real_t acc = lp.bias[o];
                for (int c = 0; c < lp.in_channels; ++c)
                    acc += lp.weight[static_cast<index_t>(o) * lp.in_channels + c] * sums[c];
                next[i][o] = lp.relu ? std::max<real_t>(acc, 0) : acc;
            }
        }
        f = std::move(next);
    }

    const int c = model.arch.widths.back();
    std::vector<real_t> pooled(c, 0.0);
    for (int ch = 0; ch < c; ++ch)
        for (int i = 0; i < g.n; ++i) pooled[ch] += f[i][ch];
    std::vector<real_t> out(model.arch.out_dim, 0.0);
    for (int t = 0; t < model.arch.out_dim; ++t) {
        real_t acc = model.head.bias[t];
        for (int ch = 0; ch < c; ++ch)
            acc += model.head.weight[static_cast<index_t>(t) * c + ch] * pooled[ch];
        out[t] = acc;
    }
    return out;
}

const std::vector<Check>& checks() {
    static const std::vector<Check> all = {
        {"scheme-invariance", check_scheme_invariance},
        {"restriction-covariance", check_restriction_covariance},
        {"operation-covariance", check_operation_covariance},
        {"representation-property", check_representation_property},
        {"kron-equivalence", check_kron_equivalence},
        {"promotion-covariance", check_promotion_covariance},
        {"stacking-covariance", check_stacking_covariance},
        {"adjacency-product-covariance", check_adjacency_product_covariance},
        {"aggregate-covariance", check_aggregate_covariance},
        {"forward-invariance", check_forward_invariance},
        {"zeroth-order-oracle", check_zeroth_order_oracle},
        {"contraction-catalog", check_contraction_catalog},
        {"gradient-check", check_gradients},
        {"gradient-invariance", check_gradient_invariance},
    };
    return all;
}

std::vector<std::string> manifest() {
    return {"scheme-invariance",
            "restriction-covariance",
            "operation-covariance",
            "representation-property",
            "kron-equivalence",
            "promotion-covariance",
            "stacking-covariance",
            "adjacency-product-covariance",
            "aggregate-covariance",
            "forward-invariance",
            "zeroth-order-oracle",
            "contraction-catalog",
            "gradient-check",
            "gradient-invariance"};
}

bool run_all(Level level, std::ostream& out) {
    const auto expected = manifest();
    std::vector<std::string> registered;
    for (const auto& c : checks()) registered.push_back(c.name);
    if (registered != expected) {
        out << "FAIL suite-manifest: registered checks do not match the manifest\n";
        return false;
    }
    bool ok = true;
    for (const auto& check : checks()) {
        const CheckResult r = check.run(level);
        if (r.pass) {
            out << "PASS " << r.name << "\n";
        } else {
            out << "FAIL " << r.name << ": " << r.detail << "\n";
            ok = false;
        }
        out.flush();
    }
    return ok;
}

} // namespace ccn::verify
