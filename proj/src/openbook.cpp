#include "torusbook/openbook.hpp"

#include "torusbook/jsonio.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace torusbook {

namespace {

// pages are materialized circle by circle; keep inputs sane
constexpr long long kMaxBoundary = 100000;

long long euler_magnitude(const Int& e) {
    Int a = abs(e);
    if (a > kMaxBoundary)
        throw std::invalid_argument("open book: |euler| too large to materialize a page");
    return static_cast<long long>(a);
}

std::string natural_label(int vertex, long long i) {
    return "v" + std::to_string(vertex) + ".n" + std::to_string(i);
}

std::string pair_label(int vertex, long long i, int sign) {
    return "v" + std::to_string(vertex) + ".p" + std::to_string(i) + (sign > 0 ? "+" : "-");
}

void append_pair(OpenBook& ob, int vertex, long long index) {
    OpenBook::Circle plus{pair_label(vertex, index, +1), vertex, true, +1, false, -1};
    OpenBook::Circle minus{pair_label(vertex, index, -1), vertex, true, -1, false, -1};
    ob.circles.push_back(plus);
    ob.circles.push_back(minus);
    ob.monodromy.push_back({plus.label, false, +1});
    ob.monodromy.push_back({minus.label, false, -1});
}

}  // namespace

std::vector<std::string> OpenBook::boundary() const {
    std::vector<std::string> out;
    for (const Circle& c : circles)
        if (!c.consumed) out.push_back(c.label);
    return out;
}

OpenBook vertex_open_book(const Int& euler, int genus) {
    if (genus < 0) throw std::invalid_argument("vertex_open_book: negative genus");
    OpenBook ob;
    ob.genus = genus;
    long long punctures = euler_magnitude(euler);
    int handedness = euler < 0 ? +1 : -1;  // right-handed iff euler negative
    for (long long i = 0; i < punctures; ++i) {
        ob.circles.push_back({natural_label(0, i), 0, false, handedness, false, -1});
        ob.monodromy.push_back({ob.circles.back().label, false, handedness});
    }
    ob.needs_augmentation = punctures == 0;
    ob.provenance.push_back({euler, genus, punctures, 0});
    return ob;
}

OpenBook add_puncture_pair(const OpenBook& ob) {
    OpenBook out = ob;
    int vertex = out.provenance.empty() ? 0 : static_cast<int>(out.provenance.size()) - 1;
    long long index = out.provenance.empty() ? 0 : out.provenance.back().pairs;
    append_pair(out, vertex, index);
    if (!out.provenance.empty()) out.provenance.back().pairs += 1;
    out.needs_augmentation = false;
    return out;
}

OpenBook remove_puncture_pair(const OpenBook& ob) {
    OpenBook out = ob;
    // find the last unused pair
    for (auto it = out.circles.rbegin(); it != out.circles.rend(); ++it) {
        if (!it->from_pair || it->consumed || it->twist_sign != -1) continue;
        std::string minus = it->label;
        std::string plus = minus.substr(0, minus.size() - 1) + "+";
        auto pit = std::find_if(out.circles.begin(), out.circles.end(),
                                [&](const OpenBook::Circle& c) { return c.label == plus; });
        if (pit == out.circles.end() || pit->consumed) continue;
        std::erase_if(out.circles, [&](const OpenBook::Circle& c) {
            return c.label == plus || c.label == minus;
        });
        std::erase_if(out.monodromy, [&](const OpenBook::Twist& t) {
            return t.curve == plus || t.curve == minus;
        });
        if (!out.provenance.empty() && out.provenance.back().pairs > 0)
            out.provenance.back().pairs -= 1;
        out.needs_augmentation = out.circles.empty();
        return out;
    }
    throw std::invalid_argument("remove_puncture_pair: no unused pair");
}

OpenBook build_from_plumbing(const PlumbingGraph& g) {
    g.validate();
    if (g.vertices.empty()) throw std::invalid_argument("build_from_plumbing: empty graph");

    int n = static_cast<int>(g.vertices.size());
    OpenBook ob;
    std::vector<std::vector<std::size_t>> available_left(n), available_right(n);

    for (int v = 0; v < n; ++v) {
        long long naturals = euler_magnitude(g.vertices[v].euler);
        int handedness = g.vertices[v].euler < 0 ? +1 : -1;
        long long need_left = 0, need_right = 0;
        for (const auto& e : g.edges) {
            if (e.u != v && e.v != v) continue;
            (e.sign < 0 ? need_left : need_right)++;
        }
        long long have_left = handedness < 0 ? naturals : 0;
        long long have_right = handedness > 0 ? naturals : 0;
        long long pairs = std::max({0LL, need_left - have_left, need_right - have_right});

        for (long long i = 0; i < naturals; ++i) {
            ob.circles.push_back({natural_label(v, i), v, false, handedness, false, -1});
            ob.monodromy.push_back({ob.circles.back().label, false, handedness});
            (handedness > 0 ? available_right : available_left)[v].push_back(
                ob.circles.size() - 1);
        }
        for (long long i = 0; i < pairs; ++i) {
            append_pair(ob, v, i);
            available_right[v].push_back(ob.circles.size() - 2);
            available_left[v].push_back(ob.circles.size() - 1);
        }
        ob.provenance.push_back({g.vertices[v].euler, g.vertices[v].genus, naturals, pairs});
    }

    // join: each edge consumes one circle of its sign at both endpoints
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        for (int endpoint : {e.u, e.v}) {
            auto& pool = e.sign < 0 ? available_left[endpoint] : available_right[endpoint];
            if (pool.empty())
                throw std::logic_error("build_from_plumbing: circle pool exhausted");
            std::size_t ci = pool.front();
            pool.erase(pool.begin());
            ob.circles[ci].consumed = true;
            ob.circles[ci].consumed_by_edge = static_cast<int>(ei);
            std::erase_if(ob.monodromy, [&](const OpenBook::Twist& t) {
                return t.curve == ob.circles[ci].label;
            });
        }
        ob.monodromy.push_back({"e" + std::to_string(ei), true, e.sign < 0 ? -1LL : 1LL});
    }

    std::size_t b1 = g.edges.size() - g.vertices.size() + 1;
    std::size_t genus_sum = 0;
    for (const auto& v : g.vertices) genus_sum += v.genus;
    ob.genus = static_cast<int>(genus_sum + b1);

    // a legal open book needs at least one boundary circle
    if (ob.boundary().empty()) {
        bool lone_trivial = n == 1 && g.vertices[0].euler == 0;
        OpenBook::Circle plus{pair_label(0, ob.provenance[0].pairs, +1), 0, true, +1, false, -1};
        OpenBook::Circle minus{pair_label(0, ob.provenance[0].pairs, -1), 0, true, -1, false, -1};
        ob.circles.push_back(plus);
        ob.circles.push_back(minus);
        ob.provenance[0].pairs += 1;
        if (lone_trivial && ob.genus == 0) {
            // annulus page: the two boundary twists are both the core twist,
            // so the opposite-handed pair cancels outright
        } else {
            ob.monodromy.push_back({plus.label, false, +1});
            ob.monodromy.push_back({minus.label, false, -1});
        }
    }
    ob.needs_augmentation = false;
    return ob;
}

OpenBookStats stats(const OpenBook& ob) {
    OpenBookStats s;
    s.genus = ob.genus;
    s.boundary = ob.boundary().size();
    for (const auto& t : ob.monodromy) {
        if (t.interior)
            (t.exp > 0 ? s.right_interior : s.left_interior)++;
        else
            (t.exp > 0 ? s.right_boundary : s.left_boundary)++;
    }
    s.elliptic = ob.genus == 1;
    return s;
}

std::string to_json(const OpenBook& ob) {
    nlohmann::json j;
    j["genus"] = ob.genus;
    j["boundary"] = ob.boundary();
    j["monodromy"] = nlohmann::json::array();
    for (const auto& t : ob.monodromy)
        j["monodromy"].push_back({{"curve", t.curve}, {"exp", t.exp}});
    return j.dump();
}

std::string render_monodromy(const OpenBook& ob) {
    if (ob.monodromy.empty()) return "1";
    // boundary circles get delta names in boundary-label order, interior
    // curves alpha names in edge order
    std::vector<std::string> labels;
    for (const auto& c : ob.circles)
        if (!c.consumed) labels.push_back(c.label);
    std::ostringstream os;
    bool first = true;
    for (const auto& t : ob.monodromy) {
        if (!first) os << " ";
        first = false;
        if (t.interior) {
            os << "α" << std::stoll(t.curve.substr(1)) + 1;  // e0 -> alpha1
        } else {
            auto it = std::find(labels.begin(), labels.end(), t.curve);
            os << "δ" << (it == labels.end() ? t.curve
                                                  : std::to_string(it - labels.begin() + 1));
        }
        if (t.exp != 1) os << "^" << t.exp;
    }
    return os.str();
}

}  // namespace torusbook
