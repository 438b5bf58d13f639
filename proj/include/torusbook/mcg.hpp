#pragma once

#include "torusbook/sl2z.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace torusbook {

// Curves on a marked genus-1 surface with n boundary circles: alpha_1..alpha_n
// (disjoint, non-separating, mutually parallel after capping), beta meeting
// each alpha once, delta_1..delta_n boundary-parallel.  Hurwitz slides produce
// images of named curves under twist words, recorded as a conjugator prefix.
enum class CurveKind { alpha, beta, delta };

struct ConjWord;

struct Curve {
    CurveKind kind = CurveKind::alpha;
    int index = 1;  // 1-based for alpha/delta, ignored for beta
    std::shared_ptr<const ConjWord> conj;  // null for plain named curves

    bool named() const { return conj == nullptr; }
    static Curve alpha(int i) { return {CurveKind::alpha, i, nullptr}; }
    static Curve beta() { return {CurveKind::beta, 0, nullptr}; }
    static Curve delta(int i) { return {CurveKind::delta, i, nullptr}; }

    std::string to_string() const;
};

bool operator==(const Curve& a, const Curve& b);
inline bool operator!=(const Curve& a, const Curve& b) { return !(a == b); }

struct TwistTerm {
    Curve curve;
    long long exp = 1;  // nonzero; positive = right-handed
    bool operator==(const TwistTerm& o) const { return curve == o.curve && exp == o.exp; }
};

struct ConjWord {
    std::vector<TwistTerm> terms;
};

struct MarkedSurface {
    int n = 1;

    // geometric intersection number of named curves; -1 when undetermined
    // (some conjugated curve involved and the pair is not syntactically equal)
    static int intersection(const Curve& a, const Curve& b);
    bool contains(const Curve& c) const;
};

struct TwistWord {
    int n = 1;
    std::vector<TwistTerm> terms;

    bool operator==(const TwistWord& o) const { return n == o.n && terms == o.terms; }
    bool all_positive() const;
    std::string to_string() const;  // "d1 d2 a1^-3 a2^-3"
};

// Image of the curve under t_w for the conjugator w; fixes curves that are
// provably disjoint from the twisting curve, so delta-slides stay named.
Curve conjugate_curve(const Curve& target, const Curve& by, long long exp);

// Action on first homology of the capped torus: t_alpha -> [[1,0],[-1,1]],
// t_beta -> [[1,1],[0,1]], t_delta -> I, conjugates and powers accordingly.
Sl2Matrix shadow(const Curve& c);
Sl2Matrix shadow(const TwistWord& w);

struct Relation {
    std::string name;
    int n = 1;
    std::vector<TwistTerm> lhs, rhs;
    bool builtin = false;
    // set when one side is (a1..an b)^c and the other d1..dn
    std::optional<long long> chain_power;
    bool delta_side_is_rhs = true;  // meaningful when chain_power is set

    std::string key() const;  // canonical content key used for deduplication
};

// true iff shadow(lhs) == shadow(rhs); the cheap necessary-condition oracle
bool validate_relation(const Relation& r);

struct Move {
    enum class Type { commute, cancel, split, braid, substitute, hurwitz };
    Type type = Type::commute;
    int pos = 0;
    long long arg = 0;     // split: exponent of the left part
    int dir = 0;           // substitute: +1 lhs->rhs, -1 rhs->lhs; hurwitz: +1 slide-left, -1 slide-right
    std::string relation;  // substitute only
};

using MoveTrace = std::vector<Move>;

struct RelationTable {
    std::vector<Relation> relations;

    static RelationTable builtins();
    // Appends distinct shadow-valid relations from a line-oriented file
    // ("name: LHS = RHS"); invalid entries are reported on stderr and
    // skipped.  Returns the number of distinct valid relations in the file.
    long long load(const std::string& path);
    long long parse_and_add(const std::string& text);  // same, from a string
    const Relation* find(const std::string& name) const;
    std::optional<std::pair<std::string, long long>> chain_for(int n) const;
    void disable(const std::string& name);
};

// Applies one move; throws std::invalid_argument when inapplicable.  The
// twist-word image in SL(2,Z) is asserted constant across every move.
TwistWord apply_move(const TwistWord& w, const Move& m, const RelationTable& table);
TwistWord replay(const TwistWord& w, const MoveTrace& trace, const RelationTable& table);

struct OvertwistedWitness {
    int delta_index = 0;
    long long exponent = 0;
    std::vector<std::string> curves;  // the pairwise-disjoint curve system
};

// Fires iff the word's curves are pairwise disjoint and some boundary twist
// has negative net exponent (left-handed boundary-parallel twist).
std::optional<OvertwistedWitness> detect_overtwisted(const TwistWord& w);

struct Certificate {
    enum class Verdict { stein, overtwisted, unknown };
    Verdict verdict = Verdict::unknown;
    std::string reason;
    std::optional<OvertwistedWitness> witness;
    TwistWord input;
    TwistWord final_word;
    MoveTrace trace;
};

struct CertifyBudget {
    int depth = 12;
    long long nodes = 50000;
};

// Replayable move scripts keyed by the word's canonical rendering.
struct HintRegistry {
    std::map<std::string, MoveTrace> scripts;
    long long load(const std::string& path);  // JSON array of {word,n,trace}
};

Certificate certify_stein(const TwistWord& w, const RelationTable& table,
                          const CertifyBudget& budget = {},
                          const HintRegistry* hints = nullptr);

// Word grammar: atoms a<k>, b, d<k>, optional ^exp, parenthesized powers,
// e.g. "(a1 a2 b)^4" or "d1 d2 a1^-3 a2^-3".
TwistWord parse_word(const std::string& text, int n);
std::optional<Relation> parse_relation_line(const std::string& line);

std::string certificate_to_json(const Certificate& c);
std::string move_to_string(const Move& m);

}  // namespace torusbook
