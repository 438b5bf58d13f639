#include "torusbook/plumbing.hpp"

#include "torusbook/jsonio.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace torusbook {

std::size_t PlumbingGraph::degree(int v) const {
    std::size_t d = 0;
    for (const Edge& e : edges) d += (e.u == v) + (e.v == v);
    return d;
}

bool PlumbingGraph::connected() const {
    if (vertices.empty()) return true;
    std::vector<char> seen(vertices.size(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (const Edge& e : edges) {
            int other = -1;
            if (e.u == x) other = e.v;
            else if (e.v == x) other = e.u;
            if (other >= 0 && !seen[other]) {
                seen[other] = 1;
                stack.push_back(other);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c; });
}

void PlumbingGraph::validate() const {
    int n = static_cast<int>(vertices.size());
    for (const Vertex& v : vertices)
        if (v.genus < 0) throw std::invalid_argument("plumbing: negative genus");
    for (const Edge& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw std::invalid_argument("plumbing: edge endpoint out of range");
        if (e.u == e.v) throw std::invalid_argument("plumbing: loops are not allowed");
        if (e.sign != 1 && e.sign != -1)
            throw std::invalid_argument("plumbing: edge sign must be +1 or -1");
    }
    if (!connected()) throw std::invalid_argument("plumbing: graph is not connected");
}

PlumbingGraph from_normal_form(const NormalForm& w) {
    if (w.exponents.empty()) throw std::invalid_argument("from_normal_form: empty word");
    PlumbingGraph g;
    int k = static_cast<int>(w.exponents.size());
    for (const Int& a : w.exponents) g.vertices.push_back({a, 0});
    g.vertices.push_back({Int(0), 0});
    for (int i = 0; i <= k; ++i) g.edges.push_back({i, (i + 1) % (k + 1), -1});
    return g;
}

PlumbingGraph circle_bundle_graph(const Int& euler, int genus) {
    if (genus < 0) throw std::invalid_argument("circle_bundle_graph: negative genus");
    PlumbingGraph g;
    g.vertices.push_back({euler, genus});
    return g;
}

IntMatrix linking_matrix(const PlumbingGraph& g) {
    g.validate();
    std::size_t n = g.vertices.size();
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = g.vertices[i].euler;
    for (const auto& e : g.edges) {
        m.at(e.u, e.v) += e.sign;
        m.at(e.v, e.u) += e.sign;
    }
    return m;
}

AbelianGroup h1(const PlumbingGraph& g) {
    g.validate();
    if (g.vertices.empty()) return {};
    std::size_t b1 = g.edges.size() - g.vertices.size() + 1;
    std::size_t genus_sum = 0;
    for (const auto& v : g.vertices) genus_sum += v.genus;
    AbelianGroup out = cokernel(linking_matrix(g));
    out.free_rank += b1 + 2 * genus_sum;
    return out;
}

PlumbingGraph vertex_flip(const PlumbingGraph& g, int v) {
    if (v < 0 || v >= static_cast<int>(g.vertices.size()))
        throw std::invalid_argument("vertex_flip: no such vertex");
    PlumbingGraph out = g;
    for (auto& e : out.edges)
        if (e.u == v || e.v == v) e.sign = -e.sign;
    return out;
}

std::map<int, int> cycle_sign_obstruction(const PlumbingGraph& g) {
    g.validate();
    std::map<int, int> out;
    if (g.vertices.size() == 0) return out;
    // spanning tree by scanning edges in index order
    std::vector<int> comp(g.vertices.size());
    for (std::size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
    auto root = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    std::vector<char> in_tree(g.edges.size(), 0);
    std::vector<std::vector<std::pair<int, int>>> tree_adj(g.vertices.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        int a = root(g.edges[i].u), b = root(g.edges[i].v);
        if (a != b) {
            comp[a] = b;
            in_tree[i] = 1;
            tree_adj[g.edges[i].u].push_back({g.edges[i].v, g.edges[i].sign});
            tree_adj[g.edges[i].v].push_back({g.edges[i].u, g.edges[i].sign});
        }
    }
    // sign of the tree path between two vertices
    auto path_sign = [&](int from, int to) {
        std::vector<int> sign_to(g.vertices.size(), 0);
        sign_to[from] = 1;
        std::vector<int> stack{from};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (auto [y, s] : tree_adj[x])
                if (!sign_to[y]) {
                    sign_to[y] = sign_to[x] * s;
                    stack.push_back(y);
                }
        }
        return sign_to[to];
    };
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (in_tree[i]) continue;
        out[static_cast<int>(i)] = g.edges[i].sign * path_sign(g.edges[i].u, g.edges[i].v);
    }
    return out;
}

PlumbingGraph blow_up_edge(const PlumbingGraph& g, int edge, int eps) {
    if (edge < 0 || edge >= static_cast<int>(g.edges.size()))
        throw std::invalid_argument("blow_up_edge: no such edge");
    if (eps != 1 && eps != -1) throw std::invalid_argument("blow_up_edge: eps must be +-1");
    PlumbingGraph out = g;
    PlumbingGraph::Edge old = out.edges[edge];
    out.edges.erase(out.edges.begin() + edge);
    int w = static_cast<int>(out.vertices.size());
    out.vertices.push_back({Int(eps), 0});
    out.vertices[old.u].euler += eps;
    out.vertices[old.v].euler += eps;
    int product = -eps * old.sign;  // required s1*s2
    int s1 = -1, s2 = (product == 1) ? -1 : 1;
    out.edges.push_back({old.u, w, s1});
    out.edges.push_back({w, old.v, s2});
    return out;
}

PlumbingGraph blow_up_leaf(const PlumbingGraph& g, int v, int eps) {
    if (v < 0 || v >= static_cast<int>(g.vertices.size()))
        throw std::invalid_argument("blow_up_leaf: no such vertex");
    if (eps != 1 && eps != -1) throw std::invalid_argument("blow_up_leaf: eps must be +-1");
    PlumbingGraph out = g;
    int w = static_cast<int>(out.vertices.size());
    out.vertices.push_back({Int(eps), 0});
    out.vertices[v].euler += eps;
    out.edges.push_back({v, w, -1});
    return out;
}

PlumbingGraph blow_down(const PlumbingGraph& g, int v) {
    if (v < 0 || v >= static_cast<int>(g.vertices.size()))
        throw std::invalid_argument("blow_down: no such vertex");
    const auto& vert = g.vertices[v];
    if (vert.euler != 1 && vert.euler != -1)
        throw std::invalid_argument("blow_down: Euler number is not +-1");
    if (vert.genus != 0) throw std::invalid_argument("blow_down: genus is not 0");
    std::vector<std::size_t> incident;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (g.edges[i].u == v || g.edges[i].v == v) incident.push_back(i);
    if (incident.size() > 2) throw std::invalid_argument("blow_down: degree exceeds 2");
    int e = static_cast<int>(vert.euler);

    PlumbingGraph out;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        if (static_cast<int>(i) != v) out.vertices.push_back(g.vertices[i]);
    auto remap = [&](int x) { return x > v ? x - 1 : x; };
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        if (std::find(incident.begin(), incident.end(), i) != incident.end()) continue;
        out.edges.push_back({remap(g.edges[i].u), remap(g.edges[i].v), g.edges[i].sign});
    }
    if (incident.size() == 1) {
        const auto& ed = g.edges[incident[0]];
        int u = ed.u == v ? ed.v : ed.u;
        out.vertices[remap(u)].euler -= e;
    } else if (incident.size() == 2) {
        const auto& e1 = g.edges[incident[0]];
        const auto& e2 = g.edges[incident[1]];
        int u1 = e1.u == v ? e1.v : e1.u;
        int u2 = e2.u == v ? e2.v : e2.u;
        if (u1 == u2)
            throw std::invalid_argument("blow_down: would create a loop (parallel edges)");
        out.edges.push_back({remap(u1), remap(u2), -e * e1.sign * e2.sign});
        out.vertices[remap(u1)].euler -= e;
        out.vertices[remap(u2)].euler -= e;
    }
    return out;
}

std::string to_json(const PlumbingGraph& g) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : g.vertices)
        j["vertices"].push_back({{"euler", json_int(v.euler)}, {"genus", v.genus}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"sign", e.sign}});
    return j.dump();
}

PlumbingGraph plumbing_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PlumbingGraph g;
    for (const auto& v : j.at("vertices"))
        g.vertices.push_back({int_from_json(v.at("euler")), v.at("genus").get<int>()});
    for (const auto& e : j.at("edges"))
        g.edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), e.at("sign").get<int>()});
    g.validate();
    return g;
}

std::string to_dot(const PlumbingGraph& g) {
    std::ostringstream os;
    os << "graph plumbing {\n";
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        os << "  v" << i << " [label=\"" << g.vertices[i].euler << ","
           << g.vertices[i].genus << "\"];\n";
    for (const auto& e : g.edges)
        os << "  v" << e.u << " -- v" << e.v << " [label=\"" << (e.sign > 0 ? "+" : "-")
           << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace torusbook
