#pragma once

#include "torusbook/plumbing.hpp"

#include <string>
#include <vector>

namespace torusbook {

// Abstract open book: a page (genus + labeled boundary circles) and a
// monodromy word of signed Dehn twists.  Curves are labels; boundary-parallel
// twists reference boundary circles, interior twists reference joined edges.
struct OpenBook {
    struct Circle {
        std::string label;
        int vertex = 0;
        bool from_pair = false;
        int twist_sign = 0;   // handedness of its boundary twist at creation
        bool consumed = false;
        int consumed_by_edge = -1;
    };
    struct Twist {
        std::string curve;
        bool interior = false;
        long long exp = 0;  // positive = right-handed
        bool operator==(const Twist&) const = default;
    };
    struct VertexInfo {
        Int euler;
        int genus = 0;
        long long naturals = 0;
        long long pairs = 0;
    };

    int genus = 0;
    std::vector<Circle> circles;
    std::vector<Twist> monodromy;
    bool needs_augmentation = false;  // closed page, set by euler = 0 vertex books
    std::vector<VertexInfo> provenance;

    std::vector<std::string> boundary() const;  // labels of unconsumed circles
};

struct OpenBookStats {
    int genus = 0;
    std::size_t boundary = 0;
    std::size_t right_boundary = 0;
    std::size_t left_boundary = 0;
    std::size_t right_interior = 0;
    std::size_t left_interior = 0;
    bool elliptic = false;
};

// Page of genus g with |e| boundary circles, one boundary twist per circle,
// right-handed iff e < 0.  e = 0 yields a closed page flagged for augmentation.
OpenBook vertex_open_book(const Int& euler, int genus);

// Adds one puncture pair: two boundary circles with opposite-handed twists.
OpenBook add_puncture_pair(const OpenBook& ob);

// Removes the last unused puncture pair (both circles unconsumed, both twists
// still present); inverse bookkeeping of add_puncture_pair.
OpenBook remove_puncture_pair(const OpenBook& ob);

// Joins per-vertex open books along the edges: positive edges consume
// right-handed circles, negative edges left-handed ones, with puncture pairs
// added per vertex to cover shortfalls.  Page genus = sum of genera + b1(G).
OpenBook build_from_plumbing(const PlumbingGraph& g);

OpenBookStats stats(const OpenBook& ob);

std::string to_json(const OpenBook& ob);
// "d1 d2 a1^-3 a2^-3" style rendering with unicode twist names
std::string render_monodromy(const OpenBook& ob);

}  // namespace torusbook
