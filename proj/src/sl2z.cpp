#include "torusbook/sl2z.hpp"

#include <sstream>
#include <stdexcept>

namespace torusbook {

std::string Sl2Matrix::to_string() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

Sl2Matrix multiply(const Sl2Matrix& x, const Sl2Matrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Sl2Matrix power(const Sl2Matrix& x, long long e) {
    Sl2Matrix base = e < 0 ? x.inverse() : x;
    unsigned long long n = e < 0 ? -(unsigned long long)e : (unsigned long long)e;
    Sl2Matrix r = Sl2Matrix::identity();
    while (n) {
        if (n & 1) r = multiply(r, base);
        base = multiply(base, base);
        n >>= 1;
    }
    return r;
}

std::string NormalForm::to_string() const {
    std::ostringstream os;
    os << "S";
    for (const Int& e : exponents) os << " T^" << e << " S";
    return os.str();
}

Sl2Matrix recompose(const NormalForm& w) {
    if (w.exponents.empty()) throw std::invalid_argument("recompose: empty word");
    Sl2Matrix r = Sl2Matrix::gen_s();
    for (const Int& e : w.exponents) {
        r = multiply(r, Sl2Matrix::t_power(e));
        r = multiply(r, Sl2Matrix::gen_s());
    }
    return r;
}

namespace {

// quotient q minimizing |q*a + c|, ties broken toward a nonnegative remainder
Int nearest_quotient(const Int& a, const Int& c) {
    Int q = -c / a;  // truncated
    Int best = q, bestr = q * a + c;
    const Int candidates[2] = {Int(q - 1), Int(q + 1)};
    for (const Int& cand : candidates) {
        Int r = cand * a + c;
        if (abs(r) < abs(bestr) || (abs(r) == abs(bestr) && r >= 0 && bestr < 0)) {
            best = cand;
            bestr = r;
        }
    }
    return best;
}

}  // namespace

NormalForm decompose(const Sl2Matrix& m) {
    if (m.det() != 1) throw std::invalid_argument("decompose: matrix not in SL(2,Z)");
    // T^k = S T^0 S T^k S T^0 S
    if (m.a == 1 && m.d == 1 && m.c == 0) return {{Int(0), m.b, Int(0)}};

    // peel blocks B(q) = S T^q off C = A * S^{-1}; B(q)^{-1} = [[q,1],[-1,0]]
    Sl2Matrix c = multiply(m, Sl2Matrix::gen_s().inverse());
    NormalForm w;
    for (;;) {
        if (c.a == 0) {
            // det 1 forces c = [[0,-1],[1,d]] = B(d) or [[0,1],[-1,d]] = S^2 B(-d)
            if (c.b == -1) {
                w.exponents.push_back(c.d);
            } else {
                w.exponents.push_back(0);
                w.exponents.push_back(0);
                w.exponents.push_back(-c.d);
            }
            return w;
        }
        Int q = nearest_quotient(c.a, c.c);
        w.exponents.push_back(q);
        c = Sl2Matrix{q * c.a + c.c, q * c.b + c.d, -c.a, -c.b};
    }
}

AbelianGroup torus_bundle_h1(const Sl2Matrix& m) {
    IntMatrix ami(2, 2, {m.a - 1, m.b, m.c, m.d - 1});
    AbelianGroup g = cokernel(ami);
    g.free_rank += 1;
    return g;
}

Sl2Matrix parse_sl2(const std::string& text) {
    std::vector<Int> vals;
    std::string tok;
    std::istringstream is(text);
    while (std::getline(is, tok, ',')) {
        std::erase_if(tok, [](unsigned char ch) { return std::isspace(ch); });
        try {
            vals.emplace_back(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument("parse_sl2: bad integer '" + tok + "'");
        }
    }
    if (vals.size() != 4) throw std::invalid_argument("parse_sl2: expected a,b,c,d");
    Sl2Matrix m{vals[0], vals[1], vals[2], vals[3]};
    if (m.det() != 1)
        throw std::invalid_argument("parse_sl2: determinant is not 1 (not in SL(2,Z))");
    return m;
}

}  // namespace torusbook
