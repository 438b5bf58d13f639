#pragma once

#include "torusbook/sl2z.hpp"
#include "torusbook/zlinalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace torusbook {

// Plumbing graph of circle bundles: per-vertex Euler number and base genus,
// signed edges, parallel edges allowed, loops rejected.
struct PlumbingGraph {
    struct Vertex {
        Int euler;
        int genus = 0;
        bool operator==(const Vertex&) const = default;
    };
    struct Edge {
        int u = 0;
        int v = 0;
        int sign = -1;  // +1 or -1
        bool operator==(const Edge&) const = default;
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;

    bool operator==(const PlumbingGraph&) const = default;

    std::size_t degree(int v) const;
    bool connected() const;  // empty graph counts as connected
    // Throws std::invalid_argument naming the first violated constraint.
    void validate() const;
};

// Cycle of k+1 genus-0 vertices weighted (a1,...,ak,0), all edges negative.
// k = 1 gives two vertices joined by a double negative edge.
PlumbingGraph from_normal_form(const NormalForm& w);

PlumbingGraph circle_bundle_graph(const Int& euler, int genus);

// Symmetric: Euler numbers on the diagonal, edge-sign sums off it.
IntMatrix linking_matrix(const PlumbingGraph& g);

// Z^{b1 + 2*sum(genus)} + coker(linking matrix), b1 = #edges - #vertices + 1.
AbelianGroup h1(const PlumbingGraph& g);

// Flips the sign of every edge incident to v (base orientation reversal).
PlumbingGraph vertex_flip(const PlumbingGraph& g, int v);

// Product of edge signs around each fundamental cycle of a fixed spanning
// tree, keyed by the non-tree edge index.  Invariant under vertex_flip.
std::map<int, int> cycle_sign_obstruction(const PlumbingGraph& g);

// Replaces edge e (sign s, ends u,v) by a genus-0 vertex w with euler = eps
// and edges (u,w,s1), (w,v,s2), s1*s2 = -eps*s; bumps euler(u), euler(v) by
// eps.  Sign choice is (-,-) when legal, else (-,+).
PlumbingGraph blow_up_edge(const PlumbingGraph& g, int edge, int eps);

// Attaches a genus-0 leaf with euler = eps to v by a negative edge and bumps
// euler(v) by eps.  Inverse of blowing the leaf back down.
PlumbingGraph blow_up_leaf(const PlumbingGraph& g, int v, int eps);

// Removes a genus-0 vertex with euler +-1 and degree <= 2, reconnecting its
// neighbors with sign -euler(v)*s1*s2 and adjusting their Euler numbers.
PlumbingGraph blow_down(const PlumbingGraph& g, int v);

std::string to_json(const PlumbingGraph& g);
PlumbingGraph plumbing_from_json(const std::string& text);
std::string to_dot(const PlumbingGraph& g);

}  // namespace torusbook
