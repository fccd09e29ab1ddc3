#include <doctest.h>

#include <map>
#include <set>

#include "ccn/contraction.hpp"
#include "ccn/random.hpp"

using namespace ccn;

namespace {

// Independent reference: sums a[idx] over every full index whose survivors
// match `out_idx` and whose grouped indices are diagonal within each group.
DenseTensor contract_loops(const DenseTensor& a, const ContractionSpec& spec) {
    std::vector<char> removed(a.order(), 0);
    for (const auto& g : spec.groups)
        for (int d : g) removed[d] = 1;
    std::vector<int> out_shape;
    for (int d = 0; d < a.order(); ++d)
        if (!removed[d]) out_shape.push_back(a.shape()[d]);
    DenseTensor out(out_shape);

    std::vector<int> idx(a.order(), 0);
    do {
        bool diagonal = true;
        for (const auto& g : spec.groups)
            for (int d : g) diagonal = diagonal && idx[d] == idx[g[0]];
        if (!diagonal) continue;
        std::vector<int> out_idx;
        for (int d = 0; d < a.order(); ++d)
            if (!removed[d]) out_idx.push_back(idx[d]);
        out.at(out_idx) += a.at(idx);
    } while (next_index(idx, a.shape()));
    return out;
}

} // namespace

TEST_CASE("contract examples") {
    SUBCASE("trace of the 2x2 identity") {
        const DenseTensor eye({2, 2}, {1, 0, 0, 1});
        const ContractionSpec spec{2, {{0, 1}}};
        const DenseTensor t = contract(eye, spec);
        CHECK(t.order() == 0);
        CHECK(t[0] == 2);
    }
    SUBCASE("all singleton groups equal project, bit for bit") {
        Rng rng(31);
        for (int rep = 0; rep < 30; ++rep) {
            const int k = rng.uniform_int(1, 4);
            std::vector<int> shape;
            for (int d = 0; d < k; ++d) shape.push_back(rng.uniform_int(2, 4));
            DenseTensor a(shape);
            for (auto& v : a.data()) v = rng.uniform(-1, 1);
            const int p = rng.uniform_int(1, k);
            std::vector<int> dims;
            for (int d : rng.shuffled_indices(k)) {
                if (static_cast<int>(dims.size()) == p) break;
                dims.push_back(d);
            }
            std::sort(dims.begin(), dims.end());
            ContractionSpec spec;
            spec.order_in = k;
            for (int d : dims) spec.groups.push_back({d});
            CHECK(contract(a, spec) == project(a, dims));
        }
    }
    SUBCASE("three-fold diagonal on a 2x2x2 diagonal tensor") {
        DenseTensor t({2, 2, 2});
        t.at({0, 0, 0}) = 1;
        t.at({1, 1, 1}) = 1;
        const ContractionSpec spec{3, {{0, 1, 2}}};
        const DenseTensor r = contract(t, spec);
        CHECK(r.order() == 0);
        CHECK(r[0] == contract_loops(t, spec)[0]);
        CHECK(r[0] == 2);
    }
    SUBCASE("matches the brute-force loop reference") {
        Rng rng(32);
        for (int rep = 0; rep < 50; ++rep) {
            const int k = rng.uniform_int(2, 5);
            const int m = rng.uniform_int(2, 3);
            DenseTensor a(std::vector<int>(k, m));
            for (auto& v : a.data()) v = rng.uniform(-1, 1);
            const int r = rng.uniform_int(0, k - 1);
            const auto specs = enumerate_contractions(k, r);
            const auto& spec = specs[rng.uniform_int(0, static_cast<int>(specs.size()) - 1)];
            const DenseTensor got = contract(a, spec);
            const DenseTensor want = contract_loops(a, spec);
            REQUIRE(got.same_shape(want));
            for (index_t i = 0; i < got.size(); ++i)
                CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13));
        }
    }
    SUBCASE("extent mismatch inside a group is an error") {
        const DenseTensor a({2, 3});
        CHECK_THROWS_AS(contract(a, ContractionSpec{2, {{0, 1}}}), error);
    }
}

TEST_CASE("contraction catalog") {
    SUBCASE("(5,2) has exactly 50 specs split 10/30/10") {
        const auto specs = enumerate_contractions(5, 2);
        REQUIRE(specs.size() == 50);
        std::map<std::string, int> by_tag;
        std::set<std::string> distinct;
        for (const auto& s : specs) {
            s.validate();
            CHECK(s.order_out() == 2);
            ++by_tag[s.case_tag()];
            distinct.insert(s.to_string());
        }
        CHECK(distinct.size() == 50);
        CHECK(by_tag["1+1+1"] == 10);
        CHECK(by_tag["1+2"] == 30);
        CHECK(by_tag["3"] == 10);
    }
    SUBCASE("(3,2) has the three single projections") {
        const auto specs = enumerate_contractions(3, 2);
        REQUIRE(specs.size() == 3);
        for (const auto& s : specs) CHECK(s.is_pure_projection());
    }
    SUBCASE("(2,1) has the row and column sums") {
        const auto specs = enumerate_contractions(2, 1);
        REQUIRE(specs.size() == 2);
        CHECK(specs[0].groups == std::vector<std::vector<int>>{{0}});
        CHECK(specs[1].groups == std::vector<std::vector<int>>{{1}});
    }
    SUBCASE("r >= k is rejected") {
        CHECK_THROWS_AS(enumerate_contractions(2, 2), error);
        CHECK_THROWS_AS(enumerate_contractions(2, 3), error);
    }
    SUBCASE("catalog ordering is deterministic") {
        const auto a = enumerate_contractions(5, 2);
        const auto b = enumerate_contractions(5, 2);
        REQUIRE(a.size() == b.size());
        for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("default contraction subset prefers pure projections") {
    const auto subset = default_contraction_subset(5, 2, 10);
    REQUIRE(subset.size() == 10);
    for (const auto& s : subset) CHECK(s.is_pure_projection());

    // Requesting more than the projection count appends delta contractions.
    const auto larger = default_contraction_subset(5, 2, 15);
    REQUIRE(larger.size() == 15);
    int projections = 0;
    for (const auto& s : larger) projections += s.is_pure_projection() ? 1 : 0;
    CHECK(projections == 10);

    // A cap beyond the catalog returns the whole catalog.
    CHECK(default_contraction_subset(3, 2, 10).size() == 3);
    CHECK(default_contraction_subset(1, 0, 10).size() == 1);
}
