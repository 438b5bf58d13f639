#include "torusbook/mcg.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace torusbook {

// ---------------------------------------------------------------- curves ---

bool operator==(const Curve& a, const Curve& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != CurveKind::beta && a.index != b.index) return false;
    bool ae = a.conj == nullptr || a.conj->terms.empty();
    bool be = b.conj == nullptr || b.conj->terms.empty();
    if (ae != be) return false;
    if (ae) return true;
    return a.conj->terms == b.conj->terms;
}

std::string Curve::to_string() const {
    std::string base;
    switch (kind) {
        case CurveKind::alpha: base = "a" + std::to_string(index); break;
        case CurveKind::beta: base = "b"; break;
        case CurveKind::delta: base = "d" + std::to_string(index); break;
    }
    if (named() || conj->terms.empty()) return base;
    std::string w;
    for (const TwistTerm& t : conj->terms) {
        if (!w.empty()) w += " ";
        w += t.curve.to_string();
        if (t.exp != 1) w += "^" + std::to_string(t.exp);
    }
    return "conj[" + w + "](" + base + ")";
}

int MarkedSurface::intersection(const Curve& a, const Curve& b) {
    if (a == b) return 0;
    if (!a.named() || !b.named()) return -1;
    bool ab = a.kind == CurveKind::alpha && b.kind == CurveKind::beta;
    bool ba = a.kind == CurveKind::beta && b.kind == CurveKind::alpha;
    return (ab || ba) ? 1 : 0;
}

bool MarkedSurface::contains(const Curve& c) const {
    if (c.kind != CurveKind::beta && (c.index < 1 || c.index > n)) return false;
    if (c.conj)
        for (const TwistTerm& t : c.conj->terms)
            if (!contains(t.curve)) return false;
    return true;
}

bool TwistWord::all_positive() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const TwistTerm& t) { return t.exp > 0; });
}

std::string TwistWord::to_string() const {
    if (terms.empty()) return "1";
    std::string out;
    for (const TwistTerm& t : terms) {
        if (!out.empty()) out += " ";
        out += t.curve.to_string();
        if (t.exp != 1) out += "^" + std::to_string(t.exp);
    }
    return out;
}

Curve conjugate_curve(const Curve& target, const Curve& by, long long exp) {
    if (exp == 0 || by == target) return target;
    if (MarkedSurface::intersection(by, target) == 0) return target;
    if (by.kind == CurveKind::delta) return target;  // boundary twists move nothing
    std::vector<TwistTerm> terms;
    terms.push_back({by, exp});
    if (target.conj)
        terms.insert(terms.end(), target.conj->terms.begin(), target.conj->terms.end());
    // free reduction at the seam
    while (terms.size() >= 2 && terms[0].curve == terms[1].curve) {
        terms[1].exp += terms[0].exp;
        terms.erase(terms.begin());
        if (terms[0].exp == 0) terms.erase(terms.begin());
    }
    Curve out{target.kind, target.index, nullptr};
    if (!terms.empty()) out.conj = std::make_shared<const ConjWord>(ConjWord{std::move(terms)});
    return out;
}

// ---------------------------------------------------------------- shadow ---

namespace {

Sl2Matrix transvection_power(const Sl2Matrix& m, long long e) { return power(m, e); }

Sl2Matrix base_shadow(CurveKind kind) {
    switch (kind) {
        case CurveKind::alpha: return {1, 0, -1, 1};
        case CurveKind::beta: return {1, 1, 0, 1};
        case CurveKind::delta: return Sl2Matrix::identity();
    }
    return Sl2Matrix::identity();
}

}  // namespace

Sl2Matrix shadow(const Curve& c) {
    Sl2Matrix m = base_shadow(c.kind);
    if (!c.conj) return m;
    Sl2Matrix w = Sl2Matrix::identity();
    for (const TwistTerm& t : c.conj->terms)
        w = multiply(w, transvection_power(shadow(t.curve), t.exp));
    return multiply(multiply(w, m), w.inverse());
}

Sl2Matrix shadow(const TwistWord& w) {
    Sl2Matrix m = Sl2Matrix::identity();
    for (const TwistTerm& t : w.terms) m = multiply(m, transvection_power(shadow(t.curve), t.exp));
    return m;
}

// ------------------------------------------------------------- relations ---

std::string Relation::key() const {
    TwistWord l{n, lhs}, r{n, rhs};
    return l.to_string() + " = " + r.to_string();
}

bool validate_relation(const Relation& r) {
    MarkedSurface surf{r.n};
    for (const auto& t : r.lhs)
        if (!surf.contains(t.curve)) return false;
    for (const auto& t : r.rhs)
        if (!surf.contains(t.curve)) return false;
    return shadow(TwistWord{r.n, r.lhs}) == shadow(TwistWord{r.n, r.rhs});
}

namespace {

// chain side (a1 a2 .. an b)^c as unit terms
std::vector<TwistTerm> chain_side(int n, long long c) {
    std::vector<TwistTerm> out;
    for (long long rep = 0; rep < c; ++rep) {
        for (int i = 1; i <= n; ++i) out.push_back({Curve::alpha(i), 1});
        out.push_back({Curve::beta(), 1});
    }
    return out;
}

std::vector<TwistTerm> delta_side(int n) {
    std::vector<TwistTerm> out;
    for (int i = 1; i <= n; ++i) out.push_back({Curve::delta(i), 1});
    return out;
}

bool matches_chain_side(const std::vector<TwistTerm>& terms, int n, long long& c_out) {
    if (terms.empty() || terms.size() % (n + 1) != 0) return false;
    long long c = static_cast<long long>(terms.size()) / (n + 1);
    if (terms != chain_side(n, c)) return false;
    c_out = c;
    return true;
}

void detect_chain(Relation& r) {
    long long c = 0;
    if (r.rhs == delta_side(r.n) && matches_chain_side(r.lhs, r.n, c)) {
        r.chain_power = c;
        r.delta_side_is_rhs = true;
    } else if (r.lhs == delta_side(r.n) && matches_chain_side(r.rhs, r.n, c)) {
        r.chain_power = c;
        r.delta_side_is_rhs = false;
    }
}

Relation make_chain_relation(int n, long long c) {
    Relation r;
    r.name = "chain" + std::to_string(n);
    r.n = n;
    r.lhs = chain_side(n, c);
    r.rhs = delta_side(n);
    r.builtin = true;
    r.chain_power = c;
    r.delta_side_is_rhs = true;
    return r;
}

}  // namespace

RelationTable RelationTable::builtins() {
    RelationTable t;
    t.relations.push_back(make_chain_relation(1, 6));
    t.relations.push_back(make_chain_relation(2, 4));
    t.relations.push_back(make_chain_relation(3, 3));
    for (const Relation& r : t.relations)
        if (!validate_relation(r))
            throw std::logic_error("builtin relation failed shadow validation: " + r.name);
    return t;
}

const Relation* RelationTable::find(const std::string& name) const {
    for (const Relation& r : relations)
        if (r.name == name) return &r;
    return nullptr;
}

std::optional<std::pair<std::string, long long>> RelationTable::chain_for(int n) const {
    for (const Relation& r : relations)
        if (r.n == n && r.chain_power) return std::make_pair(r.name, *r.chain_power);
    return std::nullopt;
}

void RelationTable::disable(const std::string& name) {
    std::erase_if(relations, [&](const Relation& r) { return r.name == name; });
}

// ---------------------------------------------------------------- parser ---

namespace {

struct WordParser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= s.size();
    }
    long long parse_int() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw std::invalid_argument("word parse: expected integer");
        return std::stoll(s.substr(start, pos - start));
    }
    std::vector<TwistTerm> parse_word(bool top) {
        std::vector<TwistTerm> out;
        for (;;) {
            skip_ws();
            if (pos >= s.size()) break;
            char ch = s[pos];
            if (ch == ')') {
                if (top) throw std::invalid_argument("word parse: unmatched ')'");
                break;
            }
            if (ch == '(') {
                ++pos;
                std::vector<TwistTerm> group = parse_word(false);
                skip_ws();
                if (pos >= s.size() || s[pos] != ')')
                    throw std::invalid_argument("word parse: missing ')'");
                ++pos;
                long long p = 1;
                skip_ws();
                if (pos < s.size() && s[pos] == '^') {
                    ++pos;
                    p = parse_int();
                }
                append_power(out, group, p);
                continue;
            }
            if (ch == '1') {  // identity word
                ++pos;
                continue;
            }
            Curve c;
            if (ch == 'a' || ch == 'd') {
                ++pos;
                std::size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (pos == start)
                    throw std::invalid_argument("word parse: curve index expected");
                int idx = std::stoi(s.substr(start, pos - start));
                c = ch == 'a' ? Curve::alpha(idx) : Curve::delta(idx);
            } else if (ch == 'b') {
                ++pos;
                c = Curve::beta();
            } else {
                throw std::invalid_argument(std::string("word parse: unexpected '") + ch + "'");
            }
            long long e = 1;
            skip_ws();
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                e = parse_int();
            }
            if (e == 0) throw std::invalid_argument("word parse: zero exponent");
            out.push_back({c, e});
        }
        return out;
    }
    static void append_power(std::vector<TwistTerm>& out, const std::vector<TwistTerm>& group,
                             long long p) {
        if (p == 0) throw std::invalid_argument("word parse: zero group power");
        if (p > 0) {
            for (long long i = 0; i < p; ++i)
                out.insert(out.end(), group.begin(), group.end());
        } else {
            for (long long i = 0; i < -p; ++i)
                for (auto it = group.rbegin(); it != group.rend(); ++it)
                    out.push_back({it->curve, -it->exp});
        }
    }
};

int max_index(const std::vector<TwistTerm>& terms) {
    int n = 1;
    for (const auto& t : terms)
        if (t.curve.kind != CurveKind::beta) n = std::max(n, t.curve.index);
    return n;
}

}  // namespace

TwistWord parse_word(const std::string& text, int n) {
    WordParser p{text};
    std::vector<TwistTerm> terms = p.parse_word(true);
    TwistWord w{n, std::move(terms)};
    MarkedSurface surf{n};
    for (const auto& t : w.terms)
        if (!surf.contains(t.curve))
            throw std::invalid_argument("word parse: curve out of range for n=" +
                                        std::to_string(n));
    return w;
}

std::optional<Relation> parse_relation_line(const std::string& line) {
    std::string trimmed = line;
    if (auto h = trimmed.find('#'); h != std::string::npos) trimmed.resize(h);
    if (std::all_of(trimmed.begin(), trimmed.end(),
                    [](unsigned char c) { return std::isspace(c); }))
        return std::nullopt;
    auto colon = trimmed.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("relation parse: missing ':'");
    auto eq = trimmed.find('=', colon);
    if (eq == std::string::npos) throw std::invalid_argument("relation parse: missing '='");
    Relation r;
    r.name = trimmed.substr(0, colon);
    std::erase_if(r.name, [](unsigned char c) { return std::isspace(c); });
    if (r.name.empty()) throw std::invalid_argument("relation parse: empty name");
    std::string lhs_text = trimmed.substr(colon + 1, eq - colon - 1);
    std::string rhs_text = trimmed.substr(eq + 1);
    WordParser lp{lhs_text}, rp{rhs_text};
    r.lhs = lp.parse_word(true);
    r.rhs = rp.parse_word(true);
    r.n = std::max(max_index(r.lhs), max_index(r.rhs));
    detect_chain(r);
    return r;
}

long long RelationTable::parse_and_add(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    long long added = 0;
    std::vector<std::string> seen;
    for (const Relation& r : relations) seen.push_back(r.key());
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::optional<Relation> r;
        try {
            r = parse_relation_line(line);
        } catch (const std::exception& e) {
            std::cerr << "relations: line " << lineno << " skipped: " << e.what() << "\n";
            continue;
        }
        if (!r) continue;
        if (!validate_relation(*r)) {
            std::cerr << "relations: line " << lineno << " (\"" << r->name
                      << "\") rejected: shadow mismatch\n";
            continue;
        }
        if (std::find(seen.begin(), seen.end(), r->key()) != seen.end()) continue;
        seen.push_back(r->key());
        relations.push_back(*r);
        ++added;
    }
    return added;
}

long long RelationTable::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("relations: cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_and_add(buf.str());
}

// ----------------------------------------------------------------- moves ---

namespace {

bool provably_disjoint(const Curve& a, const Curve& b) {
    if (a == b) return true;  // a curve commutes with its own twists
    if (a.kind == CurveKind::delta || b.kind == CurveKind::delta)
        if (a.named() && b.named()) return true;
    return MarkedSurface::intersection(a, b) == 0;
}

void check_pos(const TwistWord& w, int pos, int span) {
    if (pos < 0 || pos + span > static_cast<int>(w.terms.size()))
        throw std::invalid_argument("move: position out of range");
}

TwistWord apply_move_unchecked(const TwistWord& w, const Move& m, const RelationTable& table) {
    TwistWord out = w;
    switch (m.type) {
        case Move::Type::commute: {
            check_pos(w, m.pos, 2);
            const Curve& c1 = out.terms[m.pos].curve;
            const Curve& c2 = out.terms[m.pos + 1].curve;
            if (!provably_disjoint(c1, c2))
                throw std::invalid_argument("commute: curves not provably disjoint");
            std::swap(out.terms[m.pos], out.terms[m.pos + 1]);
            return out;
        }
        case Move::Type::cancel: {
            check_pos(w, m.pos, 2);
            TwistTerm& a = out.terms[m.pos];
            const TwistTerm& b = out.terms[m.pos + 1];
            if (!(a.curve == b.curve))
                throw std::invalid_argument("cancel: adjacent terms on different curves");
            a.exp += b.exp;
            out.terms.erase(out.terms.begin() + m.pos + 1);
            if (a.exp == 0) out.terms.erase(out.terms.begin() + m.pos);
            return out;
        }
        case Move::Type::split: {
            check_pos(w, m.pos, 1);
            TwistTerm t = out.terms[m.pos];
            long long left = m.arg, right = t.exp - m.arg;
            if (left == 0 || right == 0 || (left > 0) != (t.exp > 0) ||
                (right > 0) != (t.exp > 0))
                throw std::invalid_argument("split: parts must be nonzero with the same sign");
            out.terms[m.pos].exp = left;
            out.terms.insert(out.terms.begin() + m.pos + 1, {t.curve, right});
            return out;
        }
        case Move::Type::braid: {
            check_pos(w, m.pos, 3);
            const TwistTerm& x = out.terms[m.pos];
            const TwistTerm& y = out.terms[m.pos + 1];
            const TwistTerm& z = out.terms[m.pos + 2];
            if (!(x.curve == z.curve) || x.curve == y.curve)
                throw std::invalid_argument("braid: pattern must be (a, b, a)");
            if (MarkedSurface::intersection(x.curve, y.curve) != 1)
                throw std::invalid_argument("braid: curves must intersect once");
            long long s = x.exp;
            if ((s != 1 && s != -1) || y.exp != s || z.exp != s)
                throw std::invalid_argument("braid: exponents must be equal unit twists");
            Curve a = x.curve, b = y.curve;
            out.terms[m.pos] = {b, s};
            out.terms[m.pos + 1] = {a, s};
            out.terms[m.pos + 2] = {b, s};
            return out;
        }
        case Move::Type::substitute: {
            const Relation* rel = table.find(m.relation);
            if (!rel) throw std::invalid_argument("substitute: unknown relation " + m.relation);
            if (rel->n != w.n)
                throw std::invalid_argument("substitute: relation is for n=" +
                                            std::to_string(rel->n));
            const auto& pattern = m.dir >= 0 ? rel->lhs : rel->rhs;
            const auto& repl = m.dir >= 0 ? rel->rhs : rel->lhs;
            if (pattern.empty()) throw std::invalid_argument("substitute: empty pattern");
            check_pos(w, m.pos, static_cast<int>(pattern.size()));
            long long front_surplus = 0, back_surplus = 0;
            for (std::size_t i = 0; i < pattern.size(); ++i) {
                const TwistTerm& have = out.terms[m.pos + i];
                const TwistTerm& want = pattern[i];
                if (!(have.curve == want.curve))
                    throw std::invalid_argument("substitute: pattern mismatch");
                if (have.exp == want.exp) continue;
                bool same_sign = (have.exp > 0) == (want.exp > 0);
                bool bigger = std::llabs(have.exp) > std::llabs(want.exp);
                if (!same_sign || !bigger)
                    throw std::invalid_argument("substitute: exponent mismatch");
                if (i == 0)
                    front_surplus = have.exp - want.exp;
                else if (i + 1 == pattern.size())
                    back_surplus = have.exp - want.exp;
                else
                    throw std::invalid_argument("substitute: interior exponent mismatch");
            }
            std::vector<TwistTerm> next(out.terms.begin(), out.terms.begin() + m.pos);
            if (front_surplus != 0) next.push_back({pattern.front().curve, front_surplus});
            next.insert(next.end(), repl.begin(), repl.end());
            if (back_surplus != 0) next.push_back({pattern.back().curve, back_surplus});
            next.insert(next.end(), out.terms.begin() + m.pos + pattern.size(),
                        out.terms.end());
            out.terms = std::move(next);
            return out;
        }
        case Move::Type::hurwitz: {
            check_pos(w, m.pos, 2);
            TwistTerm x = out.terms[m.pos];
            TwistTerm y = out.terms[m.pos + 1];
            if (m.dir >= 0) {
                // (x, y) -> (y, y^-1 x y)
                out.terms[m.pos] = y;
                out.terms[m.pos + 1] = {conjugate_curve(x.curve, y.curve, -y.exp), x.exp};
            } else {
                // (x, y) -> (x y x^-1, x)
                out.terms[m.pos] = {conjugate_curve(y.curve, x.curve, x.exp), y.exp};
                out.terms[m.pos + 1] = x;
            }
            return out;
        }
    }
    throw std::invalid_argument("move: unknown type");
}

}  // namespace

TwistWord apply_move(const TwistWord& w, const Move& m, const RelationTable& table) {
    TwistWord out = apply_move_unchecked(w, m, table);
    if (!(shadow(out) == shadow(w)))
        throw std::logic_error("move changed the homology shadow: " + move_to_string(m));
    return out;
}

TwistWord replay(const TwistWord& w, const MoveTrace& trace, const RelationTable& table) {
    TwistWord cur = w;
    for (const Move& m : trace) cur = apply_move(cur, m, table);
    return cur;
}

// ----------------------------------------------------- overtwisted check ---

std::optional<OvertwistedWitness> detect_overtwisted(const TwistWord& w) {
    for (const auto& t : w.terms)
        if (!t.curve.named()) return std::nullopt;
    for (std::size_t i = 0; i < w.terms.size(); ++i)
        for (std::size_t j = i + 1; j < w.terms.size(); ++j)
            if (MarkedSurface::intersection(w.terms[i].curve, w.terms[j].curve) != 0)
                return std::nullopt;
    // net exponents per curve (all twists commute here)
    std::vector<std::pair<Curve, long long>> net;
    for (const auto& t : w.terms) {
        auto it = std::find_if(net.begin(), net.end(),
                               [&](const auto& p) { return p.first == t.curve; });
        if (it == net.end()) net.push_back({t.curve, t.exp});
        else it->second += t.exp;
    }
    for (const auto& [curve, exp] : net) {
        if (curve.kind == CurveKind::delta && exp < 0) {
            OvertwistedWitness out;
            out.delta_index = curve.index;
            out.exponent = exp;
            for (const auto& [c, e] : net)
                if (e != 0) out.curves.push_back(c.to_string());
            return out;
        }
    }
    return std::nullopt;
}

// -------------------------------------------------------------- certifier ---

namespace {

// applies a move to the working word and appends it to the trace
struct TraceBuilder {
    TwistWord word;
    MoveTrace trace;
    const RelationTable& table;

    void push(const Move& m) {
        word = apply_move(word, m, table);
        trace.push_back(m);
    }
};

long long canonical_rank(const Curve& c) {
    // deltas first by index, then alphas by index, then beta
    switch (c.kind) {
        case CurveKind::delta: return c.index;
        case CurveKind::alpha: return 1000000 + c.index;
        case CurveKind::beta: return 2000000;
    }
    return 3000000;
}

// Sorts an all-commuting word into delta..alpha order and merges same-curve
// runs, recording every swap and merge as trace moves.
void normalize_commuting(TraceBuilder& tb) {
    for (;;) {
        bool changed = false;
        for (std::size_t i = 0; i + 1 < tb.word.terms.size(); ++i) {
            const Curve& c1 = tb.word.terms[i].curve;
            const Curve& c2 = tb.word.terms[i + 1].curve;
            if (c1 == c2) {
                tb.push({Move::Type::cancel, static_cast<int>(i)});
                changed = true;
                break;
            }
            if (canonical_rank(c1) > canonical_rank(c2)) {
                tb.push({Move::Type::commute, static_cast<int>(i)});
                changed = true;
                break;
            }
        }
        if (!changed) return;
    }
}

// Slides the first negative term leftward (commuting past disjoint curves,
// Hurwitz-conjugating past the rest) until it cancels into positives.
bool eliminate_negatives(TraceBuilder& tb) {
    for (;;) {
        int j = -1;
        for (std::size_t i = 0; i < tb.word.terms.size(); ++i)
            if (tb.word.terms[i].exp < 0) {
                j = static_cast<int>(i);
                break;
            }
        if (j < 0) return true;
        if (j == 0) return false;  // nothing left to cancel against
        const TwistTerm& left = tb.word.terms[j - 1];
        const TwistTerm& slider = tb.word.terms[j];
        if (left.curve == slider.curve) {
            tb.push({Move::Type::cancel, j - 1});
        } else if (provably_disjoint(left.curve, slider.curve)) {
            tb.push({Move::Type::commute, j - 1});
        } else {
            tb.push({Move::Type::hurwitz, j - 1, 0, +1});
        }
    }
}

// rule (c): delta powers times negative alpha powers, resolved through the
// chain relation for this n
std::optional<Certificate> try_pattern_rule(const TwistWord& w, const RelationTable& table,
                                            std::string& pending_reason) {
    MarkedSurface surf{w.n};
    for (const auto& t : w.terms) {
        if (!t.curve.named()) return std::nullopt;
        if (t.curve.kind == CurveKind::beta) return std::nullopt;
        if (!surf.contains(t.curve)) return std::nullopt;
    }
    TraceBuilder tb{w, {}, table};
    normalize_commuting(tb);
    if (tb.word.all_positive()) {
        Certificate c;
        c.verdict = Certificate::Verdict::stein;
        c.input = w;
        c.final_word = tb.word;
        c.trace = tb.trace;
        return c;
    }
    // read off delta powers p_i and alpha powers
    std::vector<long long> dp(w.n + 1, 0), ap(w.n + 1, 0);
    for (const auto& t : tb.word.terms) {
        if (t.curve.kind == CurveKind::delta) dp[t.curve.index] = t.exp;
        else ap[t.curve.index] = t.exp;
    }
    for (int i = 1; i <= w.n; ++i)
        if (dp[i] < 0) return std::nullopt;  // left boundary twists: not this rule
    long long p = dp[1];
    for (int i = 2; i <= w.n; ++i) p = std::min(p, dp[i]);
    if (p < 1) {
        pending_reason = "no full boundary-twist multiple to substitute";
        return std::nullopt;
    }
    auto chain = table.chain_for(w.n);
    if (!chain) {
        pending_reason = "no chain relation for n=" + std::to_string(w.n);
        return std::nullopt;
    }
    const auto& [rel_name, c_n] = *chain;
    for (int j = 1; j <= w.n; ++j)
        if (ap[j] < 0 && -ap[j] > c_n * p) {
            pending_reason = "exponent bound exceeded";
            return std::nullopt;
        }
    // split delta powers into unit terms, surplus units kept to the left
    for (int i = w.n - 1; i >= 0; --i) {
        // after normalization term i is delta_{i+1}^{dp}
        long long e = dp[i + 1];
        for (long long k = 0; k < e - 1; ++k)
            tb.push({Move::Type::split, i + static_cast<int>(k), 1});
    }
    // bubble the last unit of each delta to form p contiguous d1..dn blocks:
    // simpler route: rebuild as units then substitute blockwise p times, each
    // time consuming the last unit of each delta index.
    const Relation* rel = table.find(rel_name);
    int sub_dir = rel->delta_side_is_rhs ? -1 : +1;  // replace deltas by the chain side
    for (long long rep = 0; rep < p; ++rep) {
        // bubble one unit of each delta index to the front, in order, then
        // substitute the contiguous d1..dn block; delta twists commute with
        // everything so every swap is a legal commute
        for (int i = 0; i < w.n; ++i) {
            int at = -1;
            for (std::size_t t = i; t < tb.word.terms.size(); ++t) {
                const auto& term = tb.word.terms[t];
                if (term.curve == Curve::delta(i + 1) && term.exp == 1) at = static_cast<int>(t);
            }
            if (at < 0) return std::nullopt;
            while (at > i) {
                tb.push({Move::Type::commute, at - 1});
                --at;
            }
        }
        tb.push({Move::Type::substitute, 0, 0, sub_dir, rel_name});
    }
    if (!eliminate_negatives(tb)) {
        pending_reason = "cancellation ran out of positive twists";
        return std::nullopt;
    }
    Certificate c;
    c.verdict = Certificate::Verdict::stein;
    c.input = w;
    c.final_word = tb.word;
    c.trace = tb.trace;
    return c;
}

std::string word_key(const TwistWord& w) { return w.to_string(); }

// bounded iterative-deepening search over named-curve moves
std::optional<MoveTrace> bounded_search(const TwistWord& w, const RelationTable& table,
                                        const CertifyBudget& budget) {
    long long nodes = budget.nodes;
    for (int limit = 1; limit <= budget.depth; ++limit) {
        std::unordered_map<std::string, int> seen;
        MoveTrace path;
        std::function<bool(const TwistWord&, int)> dfs = [&](const TwistWord& cur,
                                                             int depth) -> bool {
            if (cur.all_positive()) return true;
            if (depth == limit || nodes <= 0) return false;
            auto [it, fresh] = seen.try_emplace(word_key(cur), depth);
            if (!fresh && it->second <= depth) return false;
            it->second = depth;
            int len = static_cast<int>(cur.terms.size());
            std::vector<Move> moves;
            for (int i = 0; i + 1 < len; ++i)
                if (cur.terms[i].curve == cur.terms[i + 1].curve)
                    moves.push_back({Move::Type::cancel, i});
            for (int i = 0; i + 1 < len; ++i) {
                const Curve& c1 = cur.terms[i].curve;
                const Curve& c2 = cur.terms[i + 1].curve;
                if (!(c1 == c2) && provably_disjoint(c1, c2))
                    moves.push_back({Move::Type::commute, i});
            }
            for (int i = 0; i + 2 < len; ++i) {
                const auto& x = cur.terms[i];
                const auto& y = cur.terms[i + 1];
                const auto& z = cur.terms[i + 2];
                if (x.curve == z.curve && !(x.curve == y.curve) &&
                    MarkedSurface::intersection(x.curve, y.curve) == 1 &&
                    (x.exp == 1 || x.exp == -1) && y.exp == x.exp && z.exp == x.exp)
                    moves.push_back({Move::Type::braid, i});
            }
            for (const Relation& rel : table.relations) {
                if (rel.n != cur.n) continue;
                for (int dir : {+1, -1}) {
                    const auto& pattern = dir > 0 ? rel.lhs : rel.rhs;
                    if (pattern.empty()) continue;
                    for (int i = 0; i + static_cast<int>(pattern.size()) <= len; ++i) {
                        Move m{Move::Type::substitute, i, 0, dir, rel.name};
                        try {
                            apply_move_unchecked(cur, m, table);
                        } catch (const std::invalid_argument&) {
                            continue;
                        }
                        moves.push_back(m);
                    }
                }
            }
            for (const Move& m : moves) {
                if (--nodes <= 0) return false;
                TwistWord next;
                try {
                    next = apply_move_unchecked(cur, m, table);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                path.push_back(m);
                if (dfs(next, depth + 1)) return true;
                path.pop_back();
            }
            return false;
        };
        if (dfs(w, 0)) return path;
        if (nodes <= 0) break;
    }
    return std::nullopt;
}

}  // namespace

Certificate certify_stein(const TwistWord& w, const RelationTable& table,
                          const CertifyBudget& budget, const HintRegistry* hints) {
    MarkedSurface surf{w.n};
    for (const auto& t : w.terms)
        if (!surf.contains(t.curve))
            throw std::invalid_argument("certify_stein: curve outside the marked surface");

    Certificate cert;
    cert.input = w;

    // (a) already positive
    if (w.all_positive()) {
        cert.verdict = Certificate::Verdict::stein;
        cert.final_word = w;
        return cert;
    }
    // (b) overtwisted witness
    if (auto witness = detect_overtwisted(w)) {
        cert.verdict = Certificate::Verdict::overtwisted;
        cert.witness = witness;
        return cert;
    }
    // (c) chain-relation pattern rule
    std::string pending_reason;
    if (auto c = try_pattern_rule(w, table, pending_reason)) {
        TwistWord check = replay(w, c->trace, table);
        if (!(check == c->final_word) || !check.all_positive())
            throw std::logic_error("certify_stein: pattern-rule trace failed replay");
        return *c;
    }
    // (d) bounded search
    if (auto found = bounded_search(w, table, budget)) {
        cert.verdict = Certificate::Verdict::stein;
        cert.trace = *found;
        cert.final_word = replay(w, cert.trace, table);
        if (!cert.final_word.all_positive())
            throw std::logic_error("certify_stein: search trace failed replay");
        return cert;
    }
    // (e) registered hint script
    if (hints) {
        auto it = hints->scripts.find(word_key(w));
        if (it != hints->scripts.end()) {
            try {
                TwistWord end = replay(w, it->second, table);
                if (end.all_positive()) {
                    cert.verdict = Certificate::Verdict::stein;
                    cert.trace = it->second;
                    cert.final_word = end;
                    return cert;
                }
            } catch (const std::exception& e) {
                std::cerr << "hint script rejected: " << e.what() << "\n";
            }
        }
    }
    cert.verdict = Certificate::Verdict::unknown;
    cert.reason = pending_reason.empty() ? "search budget exhausted" : pending_reason;
    return cert;
}

// ------------------------------------------------------------------ json ---

namespace {

const char* move_name(Move::Type t) {
    switch (t) {
        case Move::Type::commute: return "commute";
        case Move::Type::cancel: return "cancel";
        case Move::Type::split: return "split";
        case Move::Type::braid: return "braid";
        case Move::Type::substitute: return "substitute";
        case Move::Type::hurwitz: return "hurwitz";
    }
    return "?";
}

nlohmann::json move_to_json(const Move& m) {
    nlohmann::json j;
    j["move"] = move_name(m.type);
    j["pos"] = m.pos;
    if (m.type == Move::Type::split) j["exp"] = m.arg;
    if (m.type == Move::Type::substitute) {
        j["relation"] = m.relation;
        j["dir"] = m.dir > 0 ? "fwd" : "rev";
    }
    if (m.type == Move::Type::hurwitz) j["dir"] = m.dir >= 0 ? "left" : "right";
    return j;
}

Move move_from_json(const nlohmann::json& j) {
    Move m;
    std::string name = j.at("move").get<std::string>();
    if (name == "commute") m.type = Move::Type::commute;
    else if (name == "cancel") m.type = Move::Type::cancel;
    else if (name == "split") m.type = Move::Type::split;
    else if (name == "braid") m.type = Move::Type::braid;
    else if (name == "substitute") m.type = Move::Type::substitute;
    else if (name == "hurwitz") m.type = Move::Type::hurwitz;
    else throw std::invalid_argument("unknown move: " + name);
    m.pos = j.at("pos").get<int>();
    if (m.type == Move::Type::split) m.arg = j.at("exp").get<long long>();
    if (m.type == Move::Type::substitute) {
        m.relation = j.at("relation").get<std::string>();
        m.dir = j.at("dir").get<std::string>() == "fwd" ? 1 : -1;
    }
    if (m.type == Move::Type::hurwitz)
        m.dir = j.at("dir").get<std::string>() == "left" ? 1 : -1;
    return m;
}

}  // namespace

std::string move_to_string(const Move& m) { return move_to_json(m).dump(); }

std::string certificate_to_json(const Certificate& c) {
    nlohmann::json j;
    switch (c.verdict) {
        case Certificate::Verdict::stein: j["verdict"] = "stein"; break;
        case Certificate::Verdict::overtwisted: j["verdict"] = "overtwisted"; break;
        case Certificate::Verdict::unknown: j["verdict"] = "unknown"; break;
    }
    j["input"] = c.input.to_string();
    j["n"] = c.input.n;
    if (c.verdict == Certificate::Verdict::stein) {
        j["final"] = c.final_word.to_string();
        j["trace"] = nlohmann::json::array();
        for (const Move& m : c.trace) j["trace"].push_back(move_to_json(m));
    }
    if (c.verdict == Certificate::Verdict::unknown) j["reason"] = c.reason;
    if (c.witness) {
        j["witness"] = {{"delta", c.witness->delta_index},
                        {"exponent", c.witness->exponent},
                        {"disjoint_curves", c.witness->curves}};
    }
    return j.dump();
}

long long HintRegistry::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("hints: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(f);
    long long added = 0;
    for (const auto& entry : j) {
        TwistWord w = parse_word(entry.at("word").get<std::string>(),
                                 entry.at("n").get<int>());
        MoveTrace trace;
        for (const auto& mv : entry.at("trace")) trace.push_back(move_from_json(mv));
        scripts[w.to_string()] = trace;
        ++added;
    }
    return added;
}

}  // namespace torusbook
