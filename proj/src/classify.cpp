#include "valence/classify.hpp"

#include <algorithm>

namespace valence {

const char* class_name(ClassKind k) {
    switch (k) {
        case ClassKind::Grp: return "Grp";
        case ClassKind::PdGrpTimesGrp: return "PD(Grp)xGrp";
        case ClassKind::VassTimesGrp: return "VASSxGrp";
        case ClassKind::Undecidable: return "undecidable";
    }
    return "?";
}

bool matches_pattern(const PresentationGraph& g, int kind, VertexId a, VertexId b, VertexId c) {
    if (a == b || b == c || a == c) return false;
    const bool ab = g.adjacent(a, b), bc = g.adjacent(b, c), ac = g.adjacent(a, c);
    switch (kind) {
        case 1: return !ab && !ac && bc && !g.looped(b) && g.looped(c);
        case 2: return !ab && !ac && bc && !g.looped(b) && !g.looped(c);
        case 3: return ab && bc && !ac && !g.looped(a) && !g.looped(b) && !g.looped(c);
        case 4: return ab && bc && !ac && !g.looped(a) && !g.looped(b) && g.looped(c);
        default: return false;
    }
}

std::optional<Pattern> find_illegal(const PresentationGraph& g) {
    const auto n = static_cast<VertexId>(g.size());
    for (VertexId a = 0; a < n; ++a)
        for (VertexId b = 0; b < n; ++b)
            for (VertexId c = 0; c < n; ++c)
                for (int kind = 1; kind <= 4; ++kind)
                    if (matches_pattern(g, kind, a, b, c)) return Pattern{kind, a, b, c};
    return std::nullopt;
}

ClassReport classify(const PresentationGraph& g) {
    ClassReport r;
    if (auto p = find_illegal(g)) {
        r.kind = ClassKind::Undecidable;
        r.witness = p;
        return r;
    }
    const auto unlooped = g.unlooped_vertices();
    const auto looped = g.looped_vertices();
    if (unlooped.empty()) {
        r.kind = ClassKind::Grp;
        r.decomposition.core = looped;
        return r;
    }
    bool stack_has_edge = false;
    for (VertexId u : unlooped)
        for (VertexId v : unlooped)
            if (g.adjacent(u, v)) stack_has_edge = true;
    r.decomposition.stack = unlooped;
    if (stack_has_edge) {
        r.kind = ClassKind::VassTimesGrp;
        r.decomposition.central = looped;
        return r;
    }
    r.kind = ClassKind::PdGrpTimesGrp;
    for (VertexId y : looped) {
        bool touches = std::any_of(unlooped.begin(), unlooped.end(), [&](VertexId u) { return g.adjacent(u, y); });
        (touches ? r.decomposition.central : r.decomposition.core).push_back(y);
    }
    return r;
}

nlohmann::json to_json(const ClassReport& r, const PresentationGraph& g) {
    auto names = [&](const std::vector<VertexId>& vs) {
        nlohmann::json out = nlohmann::json::array();
        for (VertexId v : vs) out.push_back(g.name(v));
        return out;
    };
    nlohmann::json j = {{"class", class_name(r.kind)}};
    if (r.witness) {
        j["witness"] = {{"pattern", r.witness->kind},
                        {"vertices", {g.name(r.witness->a), g.name(r.witness->b), g.name(r.witness->c)}}};
        j["route"] = "oracle";
    } else {
        j["decomposition"] = {{"stack", names(r.decomposition.stack)},
                              {"core", names(r.decomposition.core)},
                              {"central", names(r.decomposition.central)}};
        j["route"] = r.kind == ClassKind::VassTimesGrp ? "unsupported" : "solver";
    }
    return j;
}

}  // namespace valence
