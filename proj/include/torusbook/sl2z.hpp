#pragma once

#include "torusbook/zlinalg.hpp"

#include <string>
#include <vector>

namespace torusbook {

// Exact 2x2 integer matrix of determinant 1.
struct Sl2Matrix {
    Int a, b, c, d;  // [[a,b],[c,d]]

    bool operator==(const Sl2Matrix& o) const = default;

    Int det() const { return a * d - b * c; }
    Sl2Matrix inverse() const { return {d, -b, -c, a}; }
    Int trace() const { return a + d; }

    static Sl2Matrix identity() { return {1, 0, 0, 1}; }
    static Sl2Matrix gen_s() { return {0, -1, 1, 0}; }
    static Sl2Matrix gen_t() { return {1, 1, 0, 1}; }
    static Sl2Matrix t_power(const Int& k) { return {1, k, 0, 1}; }

    std::string to_string() const;
};

Sl2Matrix multiply(const Sl2Matrix& x, const Sl2Matrix& y);
Sl2Matrix power(const Sl2Matrix& x, long long e);

// Generator word S T^{a1} S T^{a2} ... S T^{ak} S, k >= 1.
struct NormalForm {
    std::vector<Int> exponents;

    bool operator==(const NormalForm& o) const = default;
    std::string to_string() const;  // "S T^1 S T^0 S"
};

Sl2Matrix recompose(const NormalForm& w);

// Deterministic: Euclidean peeling of S T^q factors off A*S^{-1}, with
// the T^k family pinned to (0, k, 0).  Guarantees recompose(decompose(A)) == A.
NormalForm decompose(const Sl2Matrix& m);

// H1 of the mapping torus with monodromy A: Z + coker(A - I).
AbelianGroup torus_bundle_h1(const Sl2Matrix& m);

// Parses "a,b,c,d"; throws std::invalid_argument on malformed or det != 1.
Sl2Matrix parse_sl2(const std::string& text);

}  // namespace torusbook
