#include "torusbook/zlinalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace torusbook {

IntMatrix::IntMatrix(std::size_t r, std::size_t c, std::vector<Int> e)
    : rows(r), cols(c), entries(std::move(e)) {
    if (entries.size() != rows * cols)
        throw std::invalid_argument("IntMatrix: entries length != rows*cols");
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
    IntMatrix r(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

Int determinant(const IntMatrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant: not square");
    std::size_t n = m.rows;
    if (n == 0) return 1;
    IntMatrix a = m;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a.at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

std::string AbelianGroup::to_string() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (free_rank == 1) {
        os << "Z";
        first = false;
    } else if (free_rank > 1) {
        os << "Z^" << free_rank;
        first = false;
    }
    for (const Int& d : torsion) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

namespace {

struct Snf {
    IntMatrix d, u, v;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < d.cols; ++k) std::swap(d.at(i, k), d.at(j, k));
        for (std::size_t k = 0; k < u.cols; ++k) std::swap(u.at(i, k), u.at(j, k));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t k = 0; k < d.rows; ++k) std::swap(d.at(k, i), d.at(k, j));
        for (std::size_t k = 0; k < v.rows; ++k) std::swap(v.at(k, i), v.at(k, j));
    }
    // row i -= q * row j
    void row_sub(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t k = 0; k < d.cols; ++k) d.at(i, k) -= q * d.at(j, k);
        for (std::size_t k = 0; k < u.cols; ++k) u.at(i, k) -= q * u.at(j, k);
    }
    // col i -= q * col j
    void col_sub(std::size_t i, std::size_t j, const Int& q) {
        if (q == 0) return;
        for (std::size_t k = 0; k < d.rows; ++k) d.at(k, i) -= q * d.at(k, j);
        for (std::size_t k = 0; k < v.rows; ++k) v.at(k, i) -= q * v.at(k, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t k = 0; k < d.cols; ++k) d.at(i, k) = -d.at(i, k);
        for (std::size_t k = 0; k < u.cols; ++k) u.at(i, k) = -u.at(i, k);
    }
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& m) {
    Snf s{m, IntMatrix::identity(m.rows), IntMatrix::identity(m.cols)};
    const std::size_t r = m.rows, c = m.cols;
    std::size_t t = 0;
    while (t < r && t < c) {
        // smallest-nonzero pivot in the submatrix
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j) {
                const Int& e = s.d.at(i, j);
                if (e == 0) continue;
                if (!found || abs(e) < abs(s.d.at(pi, pj))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);

        for (;;) {
            // clear column t below the pivot
            bool dirty = false;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (s.d.at(i, t) == 0) continue;
                Int q = s.d.at(i, t) / s.d.at(t, t);
                s.row_sub(i, t, q);
                if (s.d.at(i, t) != 0) {
                    // remainder smaller than pivot: promote it
                    s.swap_rows(t, i);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // clear row t right of the pivot
            for (std::size_t j = t + 1; j < c; ++j) {
                if (s.d.at(t, j) == 0) continue;
                Int q = s.d.at(t, j) / s.d.at(t, t);
                s.col_sub(j, t, q);
                if (s.d.at(t, j) != 0) {
                    s.swap_cols(t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;
            // divisibility fix-up: pivot must divide the whole submatrix
            bool fixed = true;
            for (std::size_t i = t + 1; i < r && fixed; ++i)
                for (std::size_t j = t + 1; j < c && fixed; ++j)
                    if (s.d.at(i, j) % s.d.at(t, t) != 0) {
                        s.row_sub(t, i, Int(-1));  // row t += row i
                        fixed = false;
                    }
            if (fixed) break;
        }
        if (s.d.at(t, t) < 0) s.negate_row(t);
        ++t;
    }
    return SmithResult{std::move(s.d), std::move(s.u), std::move(s.v)};
}

AbelianGroup cokernel(const IntMatrix& m) {
    AbelianGroup g;
    if (m.rows == 0) return g;
    if (m.cols == 0) {
        g.free_rank = m.rows;
        return g;
    }
    SmithResult s = smith_normal_form(m);
    std::size_t rank = 0;
    for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) {
        const Int& d = s.d.at(i, i);
        if (d == 0) break;
        ++rank;
        if (d >= 2) g.torsion.push_back(d);
    }
    g.free_rank = m.rows - rank;
    return g;
}

}  // namespace torusbook
