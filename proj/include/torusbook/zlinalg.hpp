#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <vector>

namespace torusbook {

using Int = boost::multiprecision::cpp_int;

// Dense integer matrix, row-major, arbitrary-precision entries.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Int> entries;  // rows*cols, row-major

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
    IntMatrix(std::size_t r, std::size_t c, std::vector<Int> e);

    static IntMatrix identity(std::size_t n);

    Int& at(std::size_t i, std::size_t j) { return entries[i * cols + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }

    bool operator==(const IntMatrix& o) const = default;
};

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Bareiss fraction-free determinant; square matrices only.
Int determinant(const IntMatrix& m);

// Finitely generated abelian group in canonical invariant-factor form.
// torsion entries are >= 2 and each divides the next.
struct AbelianGroup {
    std::size_t free_rank = 0;
    std::vector<Int> torsion;

    bool trivial() const { return free_rank == 0 && torsion.empty(); }
    bool operator==(const AbelianGroup& o) const = default;

    // Renders as e.g. "Z^2 + Z/3"; trivial group renders as "0".
    std::string to_string() const;
};

struct SmithResult {
    IntMatrix d;  // diagonal, nonnegative, divisibility chain
    IntMatrix u;  // rows x rows, det +-1
    IntMatrix v;  // cols x cols, det +-1
};

// u * m * v = d with u, v unimodular and d in Smith normal form.
// Pivoting picks the smallest nonzero entry of the working submatrix.
SmithResult smith_normal_form(const IntMatrix& m);

// Z^rows / column-image of m.  cokernel of a 0x0 matrix is trivial,
// of an n x 0 matrix is Z^n.
AbelianGroup cokernel(const IntMatrix& m);

}  // namespace torusbook
