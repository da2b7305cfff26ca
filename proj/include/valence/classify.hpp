#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "valence/monoid.hpp"

namespace valence {

enum class ClassKind { Grp, PdGrpTimesGrp, VassTimesGrp, Undecidable };

const char* class_name(ClassKind k);

// Induced three-vertex subgraphs that make the games undecidable.
//   1: a isolated, edge b-c, b loop-free, c looped
//   2: a isolated, edge b-c, b and c loop-free
//   3: induced path a-b-c, all loop-free
//   4: induced path a-b-c, a and b loop-free, c looped
struct Pattern {
    int kind = 0;
    VertexId a = 0, b = 0, c = 0;
};

bool matches_pattern(const PresentationGraph& g, int kind, VertexId a, VertexId b, VertexId c);
// First match over ordered triples in lexicographic order, patterns tried 1..4.
std::optional<Pattern> find_illegal(const PresentationGraph& g);

// Vertex roles of a decidable graph. For PD(Grp) x Grp: `stack` is the
// independent set of loop-free vertices, `core` the looped vertices adjacent to
// none of them, `central` the looped vertices adjacent to everything else.
// For VASS x Grp: `stack` is the clique of loop-free vertices and `central`
// holds all looped vertices.
struct Decomposition {
    std::vector<VertexId> stack;
    std::vector<VertexId> core;
    std::vector<VertexId> central;
};

struct ClassReport {
    ClassKind kind = ClassKind::Grp;
    std::optional<Pattern> witness;
    Decomposition decomposition;
};

ClassReport classify(const PresentationGraph& g);
nlohmann::json to_json(const ClassReport& r, const PresentationGraph& g);

}  // namespace valence
