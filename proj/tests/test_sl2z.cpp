#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torusbook/sl2z.hpp"

#include <random>

using namespace torusbook;

namespace {

NormalForm random_word(std::mt19937_64& rng, int kmax = 6, long long amax = 8) {
    std::uniform_int_distribution<int> klen(1, kmax);
    std::uniform_int_distribution<long long> expo(-amax, amax);
    NormalForm w;
    int k = klen(rng);
    for (int i = 0; i < k; ++i) w.exponents.emplace_back(expo(rng));
    return w;
}

// exhaustive search over short words, confirms a particular word exists
bool word_search_hits(const Sl2Matrix& target, const NormalForm& want, int kmax,
                      long long amax) {
    std::vector<Int> cur;
    bool found = false;
    auto rec = [&](auto&& self, int depth) -> void {
        if (found) return;
        if (depth > 0 && recompose({cur}) == target && NormalForm{cur} == want) {
            found = true;
            return;
        }
        if (depth == kmax) return;
        for (long long a = -amax; a <= amax; ++a) {
            cur.emplace_back(a);
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return found;
}

}  // namespace

TEST_CASE("generator relations") {
    Sl2Matrix s = Sl2Matrix::gen_s(), t = Sl2Matrix::gen_t();
    CHECK(multiply(s, s) == Sl2Matrix{-1, 0, 0, -1});
    CHECK(power(s, 4) == Sl2Matrix::identity());
    CHECK(power(multiply(s, t), 3) == multiply(s, s));  // S^2 = (ST)^3
    CHECK(multiply(s, t) == Sl2Matrix{0, -1, 1, 1});
}

TEST_CASE("multiply and inverse") {
    std::mt19937_64 rng(1);
    Sl2Matrix a = recompose(random_word(rng));
    CHECK(multiply(a, a.inverse()) == Sl2Matrix::identity());
    CHECK(a.det() == 1);
}

TEST_CASE("recompose pinned words") {
    CHECK(recompose({{Int(1), Int(0)}}) == Sl2Matrix{0, 1, -1, -1});
    CHECK(recompose({{Int(0), Int(5), Int(0)}}) == Sl2Matrix::t_power(5));
    CHECK(recompose({{Int(0), Int(-3), Int(0)}}) == Sl2Matrix::t_power(-3));
    CHECK(recompose({{Int(0)}}) == Sl2Matrix{-1, 0, 0, -1});
}

TEST_CASE("decompose pinned cases") {
    CHECK(decompose(Sl2Matrix{0, 1, -1, -1}) == NormalForm{{Int(1), Int(0)}});
    CHECK(decompose(Sl2Matrix{0, 1, -1, -1}).to_string() == "S T^1 S T^0 S");
    for (long long k = -10; k <= 10; ++k)
        CHECK(decompose(Sl2Matrix::t_power(k)) == NormalForm{{Int(0), Int(k), Int(0)}});
}

TEST_CASE("decompose produces a valid word and the short word exists") {
    Sl2Matrix a{1, 1, -1, 0};
    NormalForm w = decompose(a);
    CHECK(recompose(w) == a);
    CHECK(word_search_hits(a, NormalForm{{Int(0), Int(-1)}}, 3, 3));
}

TEST_CASE("round trip on 1000 random words") {
    std::mt19937_64 rng(20260810);
    for (int i = 0; i < 1000; ++i) {
        NormalForm w = random_word(rng);
        Sl2Matrix a = recompose(w);
        NormalForm back = decompose(a);
        CHECK(recompose(back) == a);
    }
}

TEST_CASE("torus bundle h1 examples") {
    CHECK(torus_bundle_h1(Sl2Matrix::identity()) == AbelianGroup{3, {}});
    for (long long k = 1; k <= 10; ++k) {
        AbelianGroup want{2, {}};
        if (k >= 2) want.torsion.push_back(k);
        CHECK(torus_bundle_h1(Sl2Matrix::t_power(k)) == want);
        CHECK(torus_bundle_h1(Sl2Matrix::t_power(-k)) == want);
    }
    CHECK(torus_bundle_h1(Sl2Matrix{-1, 0, 0, -1}) == AbelianGroup{1, {Int(2), Int(2)}});
}

TEST_CASE("torus bundle h1 is conjugation invariant") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        Sl2Matrix a = recompose(random_word(rng, 4, 5));
        Sl2Matrix p = recompose(random_word(rng, 4, 5));
        Sl2Matrix conj = multiply(multiply(p, a), p.inverse());
        CHECK(torus_bundle_h1(a) == torus_bundle_h1(conj));
    }
}

TEST_CASE("matrix parsing") {
    CHECK(parse_sl2("0,1,-1,-1") == Sl2Matrix{0, 1, -1, -1});
    CHECK(parse_sl2(" 1, 0, 0, 1 ") == Sl2Matrix::identity());
    CHECK_THROWS_AS(parse_sl2("1,2,3,4"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sl2("1,0,0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_sl2("a,b,c,d"), std::invalid_argument);
}
