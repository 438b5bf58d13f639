#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "torusbook/plumbing.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace torusbook;

namespace {

PlumbingGraph cycle_graph(std::vector<long long> weights, int sign = -1) {
    PlumbingGraph g;
    int n = static_cast<int>(weights.size());
    for (long long w : weights) g.vertices.push_back({Int(w), 0});
    if (n == 1) return g;
    for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n, sign});
    return g;
}

// brute-force multigraph isomorphism, fine for the tiny graphs in these tests
bool isomorphic(const PlumbingGraph& a, const PlumbingGraph& b) {
    if (a.vertices.size() != b.vertices.size() || a.edges.size() != b.edges.size())
        return false;
    std::vector<int> perm(a.vertices.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto edge_key = [](int u, int v, int s) {
        if (u > v) std::swap(u, v);
        return std::tuple<int, int, int>(u, v, s);
    };
    do {
        bool ok = true;
        for (std::size_t i = 0; i < a.vertices.size() && ok; ++i)
            ok = a.vertices[i] == b.vertices[perm[i]];
        if (!ok) continue;
        std::vector<std::tuple<int, int, int>> ea, eb;
        for (const auto& e : a.edges) ea.push_back(edge_key(perm[e.u], perm[e.v], e.sign));
        for (const auto& e : b.edges) eb.push_back(edge_key(e.u, e.v, e.sign));
        std::sort(ea.begin(), ea.end());
        std::sort(eb.begin(), eb.end());
        if (ea == eb) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

PlumbingGraph random_graph(std::mt19937_64& rng, int maxv = 5) {
    std::uniform_int_distribution<int> nv(1, maxv);
    std::uniform_int_distribution<long long> euler(-5, 5);
    std::uniform_int_distribution<int> genus(0, 2);
    std::uniform_int_distribution<int> coin(0, 1);
    int n = nv(rng);
    PlumbingGraph g;
    for (int i = 0; i < n; ++i) g.vertices.push_back({Int(euler(rng)), genus(rng)});
    for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> prev(0, i - 1);
        g.edges.push_back({prev(rng), i, coin(rng) ? 1 : -1});
    }
    std::uniform_int_distribution<int> extra(0, 3);
    int m = n > 1 ? extra(rng) : 0;
    for (int i = 0; i < m; ++i) {
        std::uniform_int_distribution<int> pick(0, n - 1);
        int u = pick(rng), v = pick(rng);
        if (u != v) g.edges.push_back({u, v, coin(rng) ? 1 : -1});
    }
    return g;
}

NormalForm random_word(std::mt19937_64& rng, int kmax, long long amax) {
    std::uniform_int_distribution<int> klen(1, kmax);
    std::uniform_int_distribution<long long> expo(-amax, amax);
    NormalForm w;
    int k = klen(rng);
    for (int i = 0; i < k; ++i) w.exponents.emplace_back(expo(rng));
    return w;
}

}  // namespace

TEST_CASE("from_normal_form shapes") {
    PlumbingGraph g = from_normal_form({{Int(1), Int(0)}});
    REQUIRE(g.vertices.size() == 3);
    CHECK(g.vertices[0].euler == 1);
    CHECK(g.vertices[1].euler == 0);
    CHECK(g.vertices[2].euler == 0);
    CHECK(g.edges.size() == 3);
    for (const auto& e : g.edges) CHECK(e.sign == -1);

    PlumbingGraph dbl = from_normal_form({{Int(0)}});
    REQUIRE(dbl.vertices.size() == 2);
    CHECK(dbl.edges.size() == 2);  // double negative edge
    CHECK(h1(dbl) == AbelianGroup{1, {Int(2), Int(2)}});
}

TEST_CASE("linking matrix examples") {
    IntMatrix m = linking_matrix(cycle_graph({1, 0, 0}));
    CHECK(m == IntMatrix(3, 3, {Int(1), Int(-1), Int(-1), Int(-1), Int(0), Int(-1),
                                Int(-1), Int(-1), Int(0)}));
    IntMatrix d = linking_matrix(from_normal_form({{Int(0)}}));
    CHECK(d == IntMatrix(2, 2, {Int(0), Int(-2), Int(-2), Int(0)}));
    PlumbingGraph single = circle_bundle_graph(Int(5), 1);
    CHECK(linking_matrix(single) == IntMatrix(1, 1, {Int(5)}));
}

TEST_CASE("h1 examples") {
    CHECK(h1(from_normal_form({{Int(0), Int(3), Int(0)}})) == AbelianGroup{2, {Int(3)}});
    CHECK(h1(circle_bundle_graph(Int(-2), 1)) == AbelianGroup{2, {Int(2)}});
    CHECK(h1(cycle_graph({0, 0, 0})) == AbelianGroup{1, {Int(2)}});
    CHECK(h1(circle_bundle_graph(Int(0), 1)) == AbelianGroup{3, {}});
    PlumbingGraph disconnected;
    disconnected.vertices = {{Int(1), 0}, {Int(2), 0}};
    CHECK_THROWS_AS(h1(disconnected), std::invalid_argument);
}

TEST_CASE("vertex flip") {
    PlumbingGraph tree;
    tree.vertices = {{Int(2), 0}, {Int(3), 0}};
    tree.edges = {{0, 1, -1}};
    PlumbingGraph flipped = vertex_flip(tree, 0);
    CHECK(flipped.edges[0].sign == 1);
    CHECK(flipped.vertices == tree.vertices);

    PlumbingGraph tri = cycle_graph({0, 0, 0});
    PlumbingGraph f = vertex_flip(tri, 1);
    int pos = 0, neg = 0;
    for (const auto& e : f.edges) (e.sign > 0 ? pos : neg)++;
    CHECK(pos == 2);
    CHECK(neg == 1);
    CHECK(h1(f) == h1(tri));

    PlumbingGraph lone = circle_bundle_graph(Int(7), 0);
    CHECK(vertex_flip(lone, 0) == lone);
    CHECK_THROWS_AS(vertex_flip(lone, 3), std::invalid_argument);
}

TEST_CASE("cycle sign obstruction") {
    PlumbingGraph tree;
    tree.vertices = {{Int(1), 0}, {Int(2), 0}, {Int(3), 0}};
    tree.edges = {{0, 1, -1}, {1, 2, 1}};
    CHECK(cycle_sign_obstruction(tree).empty());

    auto tri = cycle_sign_obstruction(cycle_graph({0, 0, 0}));
    REQUIRE(tri.size() == 1);
    CHECK(tri.begin()->second == -1);

    auto quad = cycle_sign_obstruction(cycle_graph({0, 0, 0, 0}));
    REQUIRE(quad.size() == 1);
    CHECK(quad.begin()->second == 1);
}

TEST_CASE("cycle signs invariant under flips; negative cycles block all-plus") {
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        PlumbingGraph g = random_graph(rng);
        auto sig = cycle_sign_obstruction(g);
        std::uniform_int_distribution<int> pick(0, static_cast<int>(g.vertices.size()) - 1);
        PlumbingGraph f = vertex_flip(g, pick(rng));
        CHECK(cycle_sign_obstruction(f) == sig);
    }
    // exhaustive flip search on small graphs
    std::mt19937_64 rng2(6);
    for (int it = 0; it < 60; ++it) {
        PlumbingGraph g = random_graph(rng2, 6);
        auto sig = cycle_sign_obstruction(g);
        bool has_negative_cycle = std::any_of(sig.begin(), sig.end(),
                                              [](auto& kv) { return kv.second < 0; });
        bool reachable_all_plus = false;
        int n = static_cast<int>(g.vertices.size());
        for (int mask = 0; mask < (1 << n); ++mask) {
            PlumbingGraph f = g;
            for (int v = 0; v < n; ++v)
                if (mask & (1 << v)) f = vertex_flip(f, v);
            if (std::all_of(f.edges.begin(), f.edges.end(),
                            [](const auto& e) { return e.sign > 0; })) {
                reachable_all_plus = true;
                break;
            }
        }
        if (has_negative_cycle) CHECK_FALSE(reachable_all_plus);
    }
}

TEST_CASE("blow up edge: opening move on the 0-0 edge") {
    PlumbingGraph g = from_normal_form({{Int(1), Int(0)}});  // 3-cycle (1,0,0)
    CHECK(h1(g) == AbelianGroup{1, {Int(3)}});
    // the 0-0 edge is edge 1 (vertices 1 and 2)
    PlumbingGraph up = blow_up_edge(g, 1, +1);
    REQUIRE(up.vertices.size() == 4);
    std::multiset<long long> weights;
    for (const auto& v : up.vertices) weights.insert(static_cast<long long>(v.euler));
    CHECK(weights == std::multiset<long long>{1, 1, 1, 1});
    for (const auto& e : up.edges) CHECK(e.sign == -1);
    CHECK(h1(up) == AbelianGroup{1, {Int(3)}});
}

TEST_CASE("blow down undoes the opening blow-up") {
    // 4-cycle (1,1,1,+1) from blowing up the 0-0 edge of the (1,0,0) cycle
    PlumbingGraph start = from_normal_form({{Int(1), Int(0)}});
    PlumbingGraph up = blow_up_edge(start, 1, +1);
    PlumbingGraph down = blow_down(up, 3);
    CHECK(isomorphic(down, start));
    for (const auto& e : down.edges) CHECK(e.sign == -1);
}

TEST_CASE("blow up then blow down returns the original graph") {
    PlumbingGraph dbl = from_normal_form({{Int(0)}});
    PlumbingGraph tri = blow_up_edge(dbl, 0, +1);
    REQUIRE(tri.vertices.size() == 3);
    CHECK(h1(tri) == AbelianGroup{1, {Int(2), Int(2)}});
    PlumbingGraph back = blow_down(tri, 2);
    CHECK(isomorphic(back, dbl));

    std::mt19937_64 rng(77);
    for (int it = 0; it < 100; ++it) {
        PlumbingGraph g = random_graph(rng, 4);
        if (g.edges.empty()) continue;
        std::uniform_int_distribution<int> pe(0, static_cast<int>(g.edges.size()) - 1);
        int eps = (it % 2) ? 1 : -1;
        PlumbingGraph up = blow_up_edge(g, pe(rng), eps);
        PlumbingGraph down = blow_down(up, static_cast<int>(up.vertices.size()) - 1);
        CHECK(isomorphic(down, g));
    }
}

TEST_CASE("blow down variants and errors") {
    PlumbingGraph leaf;
    leaf.vertices = {{Int(3), 0}, {Int(1), 0}};
    leaf.edges = {{0, 1, -1}};
    PlumbingGraph r = blow_down(leaf, 1);
    REQUIRE(r.vertices.size() == 1);
    CHECK(r.vertices[0].euler == 2);
    CHECK(r.edges.empty());

    PlumbingGraph lone = circle_bundle_graph(Int(-1), 0);
    PlumbingGraph none = blow_down(lone, 0);
    CHECK(none.vertices.empty());
    CHECK(h1(none).trivial());  // S^3

    PlumbingGraph bad = circle_bundle_graph(Int(2), 0);
    CHECK_THROWS_WITH_AS(blow_down(bad, 0), "blow_down: Euler number is not +-1",
                         std::invalid_argument);
    PlumbingGraph badg = circle_bundle_graph(Int(1), 1);
    CHECK_THROWS_WITH_AS(blow_down(badg, 0), "blow_down: genus is not 0",
                         std::invalid_argument);
    PlumbingGraph parallel;
    parallel.vertices = {{Int(0), 0}, {Int(1), 0}};
    parallel.edges = {{0, 1, -1}, {0, 1, -1}};
    CHECK_THROWS_AS(blow_down(parallel, 1), std::invalid_argument);
}

TEST_CASE("h1 oracle agrees with the mapping-torus oracle over the corpus") {
    std::vector<Sl2Matrix> corpus = {
        {0, 1, -1, -1}, {0, 1, -1, 0}, {1, 1, -1, 0}, {-1, 0, 0, -1},
        {-1, -1, 1, 0}, {0, -1, 1, 0}, {0, -1, 1, 1},
    };
    for (long long k = -10; k <= 10; ++k) corpus.push_back(Sl2Matrix::t_power(k));
    for (const Sl2Matrix& a : corpus)
        CHECK(h1(from_normal_form(decompose(a))) == torus_bundle_h1(a));

    std::mt19937_64 rng(20260810);
    for (int it = 0; it < 500; ++it) {
        NormalForm w = random_word(rng, 5, 5);
        Sl2Matrix a = recompose(w);
        CHECK(h1(from_normal_form(w)) == torus_bundle_h1(a));
        CHECK(h1(from_normal_form(decompose(a))) == torus_bundle_h1(a));
    }
}

TEST_CASE("h1 invariant under random move sequences") {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> move_kind(0, 3);
    for (int it = 0; it < 500; ++it) {
        PlumbingGraph g = random_graph(rng);
        AbelianGroup want = h1(g);
        for (int step = 0; step < 10; ++step) {
            int kind = move_kind(rng);
            std::uniform_int_distribution<int> pv(0, static_cast<int>(g.vertices.size()) - 1);
            if (kind == 0 && !g.edges.empty()) {
                std::uniform_int_distribution<int> pe(0, static_cast<int>(g.edges.size()) - 1);
                g = blow_up_edge(g, pe(rng), (step % 2) ? 1 : -1);
            } else if (kind == 1) {
                g = blow_up_leaf(g, pv(rng), (step % 2) ? 1 : -1);
            } else if (kind == 2) {
                g = vertex_flip(g, pv(rng));
            } else {
                // first vertex where blow-down applies, if any
                for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
                    const auto& vert = g.vertices[v];
                    if ((vert.euler == 1 || vert.euler == -1) && vert.genus == 0 &&
                        g.degree(v) <= 2) {
                        try {
                            g = blow_down(g, v);
                        } catch (const std::invalid_argument&) {
                            continue;  // parallel-edge case
                        }
                        break;
                    }
                }
            }
            if (g.vertices.empty()) break;
            CHECK(h1(g) == want);
        }
    }
}

TEST_CASE("json and dot round trip") {
    PlumbingGraph g = from_normal_form({{Int(0), Int(3), Int(0)}});
    PlumbingGraph back = plumbing_from_json(to_json(g));
    CHECK(back == g);
    std::string dot = to_dot(g);
    CHECK(dot.find("graph plumbing") != std::string::npos);
    CHECK(dot.find("label=\"3,0\"") != std::string::npos);
    CHECK(dot.find("label=\"-\"") != std::string::npos);
}

TEST_CASE("validation rejects bad graphs") {
    PlumbingGraph loop;
    loop.vertices = {{Int(0), 0}};
    loop.edges = {{0, 0, -1}};
    CHECK_THROWS_WITH_AS(loop.validate(), "plumbing: loops are not allowed",
                         std::invalid_argument);
    PlumbingGraph badsign;
    badsign.vertices = {{Int(0), 0}, {Int(0), 0}};
    badsign.edges = {{0, 1, 2}};
    CHECK_THROWS_AS(badsign.validate(), std::invalid_argument);
    PlumbingGraph range;
    range.vertices = {{Int(0), 0}};
    range.edges = {{0, 1, 1}};
    CHECK_THROWS_AS(range.validate(), std::invalid_argument);
}
