#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torusbook/zlinalg.hpp"

#include <numeric>
#include <random>
#include <vector>

using namespace torusbook;

namespace {

IntMatrix mat(std::size_t r, std::size_t c, std::vector<long long> e) {
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < e.size(); ++i) m.entries[i] = e[i];
    return m;
}

// Independent oracle: invariant factors from determinantal divisors.
// d_k = gcd of all k x k minors; k-th invariant factor = d_k / d_{k-1}.
// Exponential in size, fine for the small matrices we fuzz with.
Int minor_det(const IntMatrix& m, const std::vector<std::size_t>& ri,
              const std::vector<std::size_t>& ci) {
    IntMatrix sub(ri.size(), ci.size());
    for (std::size_t i = 0; i < ri.size(); ++i)
        for (std::size_t j = 0; j < ci.size(); ++j) sub.at(i, j) = m.at(ri[i], ci[j]);
    return determinant(sub);
}

void subsets(std::size_t n, std::size_t k, std::vector<std::size_t>& cur,
             std::size_t start, std::vector<std::vector<std::size_t>>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i < n; ++i) {
        cur.push_back(i);
        subsets(n, k, cur, i + 1, out);
        cur.pop_back();
    }
}

std::vector<Int> invariant_factors_by_minors(const IntMatrix& m) {
    std::vector<Int> divisors;  // d_1, d_2, ...
    std::size_t kmax = std::min(m.rows, m.cols);
    for (std::size_t k = 1; k <= kmax; ++k) {
        std::vector<std::vector<std::size_t>> rs, cs;
        std::vector<std::size_t> cur;
        subsets(m.rows, k, cur, 0, rs);
        subsets(m.cols, k, cur, 0, cs);
        Int g = 0;
        for (const auto& ri : rs)
            for (const auto& ci : cs) g = gcd(g, minor_det(m, ri, ci));
        if (g == 0) break;
        divisors.push_back(g);
    }
    std::vector<Int> factors;
    Int prev = 1;
    for (const Int& d : divisors) {
        factors.push_back(d / prev);
        prev = d;
    }
    while (factors.size() < kmax) factors.push_back(0);
    return factors;
}

void check_snf_contract(const IntMatrix& m) {
    SmithResult s = smith_normal_form(m);
    CHECK(multiply(multiply(s.u, m), s.v) == s.d);
    CHECK(abs(determinant(s.u)) == 1);
    CHECK(abs(determinant(s.v)) == 1);
    Int prev = -1;
    for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) {
        for (std::size_t j = 0; j < m.cols; ++j)
            if (j != i) CHECK(s.d.at(i, j) == 0);
        const Int& d = s.d.at(i, i);
        CHECK(d >= 0);
        if (prev >= 0) {
            if (prev == 0) CHECK(d == 0);
            else CHECK(d % prev == 0);
        }
        prev = d;
    }
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t maxdim = 4, long long span = 9) {
    std::uniform_int_distribution<std::size_t> dim(0, maxdim);
    std::uniform_int_distribution<long long> val(-span, span);
    IntMatrix m(dim(rng), dim(rng));
    for (auto& e : m.entries) e = val(rng);
    return m;
}

// random product of elementary row/col operations
IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    if (n == 0) return u;
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long long> val(-3, 3);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int step = 0; step < 12; ++step) {
        std::size_t i = idx(rng), j = idx(rng);
        switch (kind(rng)) {
            case 0:
                if (i != j) {
                    Int mult(val(rng));
                    for (std::size_t k = 0; k < n; ++k) u.at(i, k) += mult * u.at(j, k);
                }
                break;
            case 1:
                if (i != j)
                    for (std::size_t k = 0; k < n; ++k) std::swap(u.at(i, k), u.at(j, k));
                break;
            case 2:
                for (std::size_t k = 0; k < n; ++k) u.at(i, k) = -u.at(i, k);
                break;
        }
    }
    return u;
}

}  // namespace

TEST_CASE("smith normal form: pinned examples") {
    {
        SmithResult s = smith_normal_form(mat(2, 2, {2, 0, 0, 3}));
        CHECK(s.d.at(0, 0) == 1);
        CHECK(s.d.at(1, 1) == 6);
        CHECK(multiply(multiply(s.u, mat(2, 2, {2, 0, 0, 3})), s.v) == s.d);
    }
    {
        SmithResult s = smith_normal_form(mat(1, 1, {0}));
        CHECK(s.d.at(0, 0) == 0);
    }
    {
        IntMatrix m = mat(2, 2, {-1, 1, -1, -1});
        SmithResult s = smith_normal_form(m);
        CHECK(s.d.at(0, 0) == 1);
        CHECK(s.d.at(1, 1) == 2);
        auto oracle = invariant_factors_by_minors(m);
        REQUIRE(oracle.size() == 2);
        CHECK(oracle[0] == 1);
        CHECK(oracle[1] == 2);
    }
}

TEST_CASE("smith normal form: empty shapes") {
    check_snf_contract(IntMatrix(0, 0));
    check_snf_contract(IntMatrix(3, 0));
    check_snf_contract(IntMatrix(0, 3));
}

TEST_CASE("cokernel: pinned examples") {
    CHECK(cokernel(mat(2, 2, {0, 0, 0, 0})) == AbelianGroup{2, {}});
    CHECK(cokernel(mat(2, 2, {-1, 1, -1, -1})) == AbelianGroup{0, {2}});
    CHECK(cokernel(mat(2, 2, {-2, 0, 0, -2})) == AbelianGroup{0, {2, 2}});
    CHECK(cokernel(IntMatrix(0, 0)).trivial());
    CHECK(cokernel(IntMatrix(3, 0)) == AbelianGroup{3, {}});
}

TEST_CASE("group rendering") {
    CHECK(AbelianGroup{2, {Int(3)}}.to_string() == "Z^2 + Z/3");
    CHECK(AbelianGroup{1, {}}.to_string() == "Z");
    CHECK(AbelianGroup{0, {Int(2), Int(2)}}.to_string() == "Z/2 + Z/2");
    CHECK(AbelianGroup{}.to_string() == "0");
}

TEST_CASE("snf contract holds on 10000 random matrices") {
    std::mt19937_64 rng(20260810);
    for (int it = 0; it < 10000; ++it) check_snf_contract(random_matrix(rng));
}

TEST_CASE("snf invariant factors agree with minors oracle") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 400; ++it) {
        IntMatrix m = random_matrix(rng, 4, 6);
        SmithResult s = smith_normal_form(m);
        auto oracle = invariant_factors_by_minors(m);
        for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(s.d.at(i, i) == oracle[i]);
    }
}

TEST_CASE("cokernel invariant under unimodular factors") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 300; ++it) {
        IntMatrix m = random_matrix(rng);
        AbelianGroup g = cokernel(m);
        IntMatrix p = random_unimodular(rng, m.rows);
        IntMatrix q = random_unimodular(rng, m.cols);
        CHECK(cokernel(multiply(p, m)) == g);
        CHECK(cokernel(multiply(m, q)) == g);
        CHECK(cokernel(multiply(multiply(p, m), q)) == g);
    }
}

TEST_CASE("group equality is canonical across presentations") {
    // diag(2,3) and diag(6,1) present the same group Z/6
    CHECK(cokernel(mat(2, 2, {2, 0, 0, 3})) == cokernel(mat(2, 2, {6, 0, 0, 1})));
    CHECK(cokernel(mat(2, 2, {4, 2, 0, 2})) == cokernel(mat(2, 2, {2, 0, 0, 4})));
}
