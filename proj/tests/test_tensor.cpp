#include <doctest.h>

#include "ccn/random.hpp"
#include "ccn/tensor.hpp"

using namespace ccn;

namespace {

DenseTensor vec(std::vector<real_t> v) {
    const int n = static_cast<int>(v.size());
    return DenseTensor({n}, std::move(v));
}

DenseTensor mat2(real_t a, real_t b, real_t c, real_t d) { return DenseTensor({2, 2}, {a, b, c, d}); }

// Brute-force reference for permute_action: out[pi(j1)..pi(jk)] = in[j1..jk],
// written with explicit index vectors rather than strides.
DenseTensor permute_action_loops(const DenseTensor& a, const Permutation& pi) {
    DenseTensor out(a.shape());
    std::vector<int> idx(a.order(), 0);
    std::vector<int> mapped(a.order(), 0);
    do {
        for (int d = 0; d < a.order(); ++d) mapped[d] = pi(idx[d]);
        out.at(mapped) = a.at(idx);
    } while (next_index(idx, a.shape()));
    return out;
}

} // namespace

TEST_CASE("tensor product basics") {
    const DenseTensor t = mat2(1, 2, 3, 4);
    CHECK(tensor_product(DenseTensor::scalar(1.0), t) == t);

    // [1,2] (x) [3,4] = [[3,4],[6,8]]
    const DenseTensor p = tensor_product(vec({1, 2}), vec({3, 4}));
    CHECK(p == DenseTensor({2, 2}, {3, 4, 6, 8}));

    const DenseTensor a({2, 2}, 1.0);
    const DenseTensor b({2, 2, 2}, 1.0);
    CHECK(tensor_product(a, b).order() == 5);
}

TEST_CASE("elementwise product") {
    const DenseTensor eye = mat2(1, 0, 0, 1);
    SUBCASE("all-ones leaves the tensor unchanged") {
        const std::vector<int> dims = {0};
        CHECK(elementwise_product(eye, vec({1, 1}), dims) == eye);
    }
    SUBCASE("identity scaled along dim 0") {
        const std::vector<int> dims = {0};
        CHECK(elementwise_product(eye, vec({2, 3}), dims) == mat2(2, 0, 0, 3));
    }
    SUBCASE("p = k gives the Hadamard product") {
        const DenseTensor a = mat2(1, 2, 3, 4);
        const DenseTensor b = mat2(5, 6, 7, 8);
        const std::vector<int> dims = {0, 1};
        CHECK(elementwise_product(a, b, dims) == mat2(5, 12, 21, 32));
    }
    SUBCASE("shape mismatch is an error") {
        const std::vector<int> dims = {0};
        CHECK_THROWS_AS(elementwise_product(eye, vec({1, 2, 3}), dims), error);
    }
}

TEST_CASE("projection") {
    const DenseTensor a = mat2(1, 2, 3, 4);
    SUBCASE("both dims gives the grand sum") {
        const std::vector<int> dims = {0, 1};
        const DenseTensor s = project(a, dims);
        CHECK(s.order() == 0);
        CHECK(s[0] == 10);
    }
    SUBCASE("dim 0 gives column sums") {
        const std::vector<int> dims = {0};
        CHECK(project(a, dims) == vec({4, 6}));
    }
    SUBCASE("order-0 tensor with empty dims is unchanged") {
        const DenseTensor s = DenseTensor::scalar(7.0);
        CHECK(project(s, {}) == s);
    }
    SUBCASE("duplicate dims are an error") {
        const std::vector<int> dims = {0, 0};
        CHECK_THROWS_AS(project(a, dims), error);
    }
}

TEST_CASE("linear combination") {
    const DenseTensor t = mat2(1, 2, 3, 4);
    SUBCASE("single tensor with coefficient 1") {
        const std::vector<DenseTensor> ts = {t};
        const std::vector<real_t> cs = {1};
        CHECK(linear_combination(ts, cs) == t);
    }
    SUBCASE("t - t vanishes") {
        const std::vector<DenseTensor> ts = {t, t};
        const std::vector<real_t> cs = {1, -1};
        CHECK(linear_combination(ts, cs) == mat2(0, 0, 0, 0));
    }
    SUBCASE("2*[[1,2],[3,4]] + [[0,1],[1,0]] = [[2,5],[7,8]]") {
        const std::vector<DenseTensor> ts = {t, mat2(0, 1, 1, 0)};
        const std::vector<real_t> cs = {2, 1};
        CHECK(linear_combination(ts, cs) == mat2(2, 5, 7, 8));
    }
    SUBCASE("shape mismatch is an error") {
        const std::vector<DenseTensor> ts = {t, vec({1, 2})};
        const std::vector<real_t> cs = {1, 1};
        CHECK_THROWS_AS(linear_combination(ts, cs), error);
    }
}

TEST_CASE("permute action") {
    SUBCASE("identity leaves tensors unchanged") {
        Rng rng(5);
        const DenseTensor t = [&] {
            DenseTensor x({3, 3, 3});
            for (auto& v : x.data()) v = rng.uniform(-1, 1);
            return x;
        }();
        CHECK(permute_action(t, Permutation::identity(3)) == t);
    }
    SUBCASE("order-1 swap") {
        CHECK(permute_action(vec({5, 7}), Permutation({1, 0})) == vec({7, 5}));
    }
    SUBCASE("order-2 equals P F P^T") {
        // swap on [[1,2],[3,4]] -> [[4,3],[2,1]]
        CHECK(permute_action(mat2(1, 2, 3, 4), Permutation({1, 0})) == mat2(4, 3, 2, 1));
    }
    SUBCASE("matches the index-vector reference on random tensors") {
        Rng rng(6);
        for (int rep = 0; rep < 20; ++rep) {
            const int m = rng.uniform_int(2, 4);
            const int k = rng.uniform_int(1, 3);
            DenseTensor t(std::vector<int>(k, m));
            for (auto& v : t.data()) v = rng.uniform(-1, 1);
            const Permutation pi = rng.permutation(m);
            CHECK(permute_action(t, pi) == permute_action_loops(t, pi));
        }
    }
    SUBCASE("non-cubic tensors are rejected") {
        CHECK_THROWS_AS(permute_action(DenseTensor({2, 3}), Permutation({1, 0})), error);
    }
}

TEST_CASE("kronecker action on flattened order-2 tensors") {
    SUBCASE("identity") {
        const DenseTensor f = vec({1, 2, 3, 4});
        CHECK(kron_action_order2(f, Permutation::identity(2)) == f);
    }
    SUBCASE("m=2 swap: vec([[1,2],[3,4]]) -> vec([[4,3],[2,1]])") {
        CHECK(kron_action_order2(vec({1, 2, 3, 4}), Permutation({1, 0})) == vec({4, 3, 2, 1}));
    }
    SUBCASE("agrees with the matrix action for all pi in S_3") {
        Rng rng(7);
        for (const auto& pi : all_permutations(3)) {
            DenseTensor f({9});
            for (auto& v : f.data()) v = rng.uniform(-1, 1);
            const DenseTensor matrix({3, 3},
                                     std::vector<real_t>(f.data().begin(), f.data().end()));
            const DenseTensor turned = permute_action(matrix, pi);
            const DenseTensor flat = kron_action_order2(f, pi);
            for (int i = 0; i < 9; ++i) CHECK(flat[i] == turned[i]);
        }
    }
    SUBCASE("non-square length is an error") {
        CHECK_THROWS_AS(kron_action_order2(vec({1, 2, 3}), Permutation({1, 0})), error);
    }
}

TEST_CASE("representation property of the tensor action") {
    Rng rng(8);
    for (int m = 2; m <= 4; ++m)
        for (const auto& p1 : all_permutations(m))
            for (const auto& p2 : all_permutations(m)) {
                DenseTensor t({m, m});
                for (auto& v : t.data()) v = rng.uniform(-1, 1);
                CHECK(permute_action(permute_action(t, p1), p2) ==
                      permute_action(t, compose(p2, p1)));
            }
}
