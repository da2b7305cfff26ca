#include "valence/monoid.hpp"

#include <algorithm>
#include <cctype>

#include "valence/errors.hpp"

namespace valence {

namespace {

constexpr RestrictedCayley::Node kUnknown = RestrictedCayley::kTrap - 1;

bool valid_name(std::string_view name) {
    if (name.empty() || name.back() == '-') return false;
    return std::none_of(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::size_t WordHash::operator()(const Word& w) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (Letter x : w) {
        h ^= static_cast<std::size_t>(x.key());
        h *= 0x100000001b3ull;
    }
    return h;
}

VertexId PresentationGraph::add_vertex(std::string name, bool looped) {
    if (!valid_name(name)) throw InputError("invalid vertex name '" + name + "'");
    if (index_.count(name)) throw InputError("duplicate vertex name '" + name + "'");
    auto id = static_cast<VertexId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    looped_.push_back(looped ? 1 : 0);
    for (auto& row : adj_) row.push_back(0);
    adj_.emplace_back(names_.size(), 0);
    return id;
}

void PresentationGraph::add_edge(VertexId u, VertexId v) {
    if (u >= size() || v >= size()) throw InputError("edge endpoint out of range");
    if (u == v) throw InputError("self-edges are expressed by the looped flag, not by an edge");
    adj_[u][v] = adj_[v][u] = 1;
}

void PresentationGraph::add_edge(std::string_view u, std::string_view v) { add_edge(index_of(u), index_of(v)); }

std::optional<VertexId> PresentationGraph::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

VertexId PresentationGraph::index_of(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw InputError("unknown vertex '" + std::string(name) + "'");
}

std::vector<std::pair<VertexId, VertexId>> PresentationGraph::edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId u = 0; u < size(); ++u)
        for (VertexId v = u + 1; v < size(); ++v)
            if (adj_[u][v]) out.emplace_back(u, v);
    return out;
}

std::vector<VertexId> PresentationGraph::looped_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < size(); ++v)
        if (looped_[v]) out.push_back(v);
    return out;
}

std::vector<VertexId> PresentationGraph::unlooped_vertices() const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < size(); ++v)
        if (!looped_[v]) out.push_back(v);
    return out;
}

Letter PresentationGraph::parse_letter(std::string_view token) const {
    bool inverse = !token.empty() && token.back() == '-';
    if (inverse) token.remove_suffix(1);
    return {index_of(token), inverse};
}

Word PresentationGraph::parse_word(std::string_view text) const {
    Word out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) {
            std::string_view tok = text.substr(i, j - i);
            if (tok != "eps" && tok != "ε") out.push_back(parse_letter(tok));
        }
        i = j;
    }
    return out;
}

std::string PresentationGraph::format_letter(Letter x) const { return name(x.vertex) + (x.inverse ? "-" : ""); }

std::string PresentationGraph::format_word(const Word& w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += format_letter(w[i]);
    }
    return out;
}

nlohmann::json PresentationGraph::to_json() const {
    nlohmann::json vs = nlohmann::json::array();
    for (VertexId v = 0; v < size(); ++v) vs.push_back({{"name", names_[v]}, {"looped", looped(v)}});
    nlohmann::json es = nlohmann::json::array();
    for (auto [u, v] : edges()) es.push_back({names_[u], names_[v]});
    return {{"vertices", vs}, {"edges", es}};
}

PresentationGraph PresentationGraph::from_json(const nlohmann::json& j) {
    PresentationGraph g;
    try {
        for (const auto& v : j.at("vertices")) g.add_vertex(v.at("name").get<std::string>(), v.value("looped", false));
        if (j.contains("edges"))
            for (const auto& e : j.at("edges")) {
                if (!e.is_array() || e.size() != 2) throw InputError("edge must be a pair of vertex names");
                g.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
            }
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed graph: ") + ex.what());
    }
    return g;
}

void append_reduced(const PresentationGraph& g, Word& trace, Letter x) {
    for (std::size_t i = trace.size(); i-- > 0;) {
        Letter y = trace[i];
        if (y.vertex == x.vertex) {
            if (cancels(g, y, x)) {
                trace.erase(trace.begin() + static_cast<std::ptrdiff_t>(i));
                return;
            }
            break;
        }
        if (!g.adjacent(y.vertex, x.vertex)) break;
    }
    trace.push_back(x);
}

void append_canonical(const PresentationGraph& g, Word& canonical, Letter x) {
    std::size_t i = canonical.size();
    while (i > 0) {
        Letter y = canonical[i - 1];
        if (y.vertex == x.vertex) {
            if (cancels(g, y, x)) {
                // y commutes with everything after it, so dropping it keeps the order canonical.
                canonical.erase(canonical.begin() + static_cast<std::ptrdiff_t>(i - 1));
                return;
            }
            break;
        }
        if (!g.adjacent(y.vertex, x.vertex)) break;
        --i;
    }
    // x commutes with canonical[i..]; it goes before the first larger letter there.
    while (i < canonical.size() && canonical[i].key() < x.key()) ++i;
    canonical.insert(canonical.begin() + static_cast<std::ptrdiff_t>(i), x);
}

Word canonical_order(const PresentationGraph& g, const Word& trace) {
    const std::size_t n = trace.size();
    if (n < 2) return trace;
    // blockers[i]: earlier letters that must precede trace[i].
    std::vector<std::uint32_t> blockers(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!g.commute(trace[j], trace[i])) ++blockers[i];
    std::vector<char> taken(n, 0);
    Word out;
    out.reserve(n);
    for (std::size_t round = 0; round < n; ++round) {
        std::size_t best = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!taken[i] && blockers[i] == 0 && (best == n || trace[i].key() < trace[best].key())) best = i;
        taken[best] = 1;
        out.push_back(trace[best]);
        for (std::size_t k = best + 1; k < n; ++k)
            if (!taken[k] && !g.commute(trace[best], trace[k])) --blockers[k];
    }
    return out;
}

Word reduce_word(const PresentationGraph& g, const Word& w) {
    Word out;
    out.reserve(w.size());
    for (Letter x : w) {
        if (x.vertex >= g.size()) throw InputError("letter refers to unknown vertex");
        append_canonical(g, out, x);
    }
    return out;
}

Word multiply(const PresentationGraph& g, const Word& canonical, const Word& w) {
    Word out = canonical;
    for (Letter x : w) append_canonical(g, out, x);
    return out;
}

Word multiply(const PresentationGraph& g, const Word& canonical, Letter x) {
    Word out = canonical;
    append_canonical(g, out, x);
    return out;
}

bool is_right_invertible(const PresentationGraph& g, const Word& canonical) {
    return std::none_of(canonical.begin(), canonical.end(), [&](Letter x) { return x.inverse && !g.looped(x.vertex); });
}

Word formal_inverse(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->bar());
    return out;
}

std::size_t geodesic_length(const PresentationGraph& g, const Word& canonical) {
    for (Letter x : canonical)
        if (!g.looped(x.vertex))
            throw DomainError("geodesic length requested for an element with loop-free vertex '" + g.name(x.vertex) + "'");
    return canonical.size();
}

MonoidElement MonoidElement::operator*(const MonoidElement& other) const { return *this * other.trace_; }

MonoidElement MonoidElement::operator*(const Word& w) const {
    MonoidElement out = *this;
    out.trace_ = multiply(*graph_, trace_, w);
    return out;
}

MonoidElement reduce(const Word& w, const PresentationGraph& g) { return MonoidElement(g, w); }

RestrictedCayley::RestrictedCayley(const PresentationGraph& g, std::vector<VertexId> generators, std::size_t radius)
    : graph_(&g), generators_(std::move(generators)), slot_of_vertex_(g.size(), -1), radius_(radius) {
    std::sort(generators_.begin(), generators_.end());
    generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        VertexId v = generators_[i];
        if (v >= g.size()) throw InputError("Cayley generator out of range");
        if (!g.looped(v)) throw DomainError("Cayley graph requested over loop-free vertex '" + g.name(v) + "'");
        slot_of_vertex_[v] = static_cast<int>(i);
    }
    elements_.push_back(Word{});
    index_.emplace(Word{}, 0);
    succ_.emplace_back(2 * generators_.size(), kUnknown);
}

RestrictedCayley RestrictedCayley::build(const PresentationGraph& g, std::vector<VertexId> generators, std::size_t radius) {
    RestrictedCayley c(g, std::move(generators), radius);
    c.expand_all();
    return c;
}

bool RestrictedCayley::is_generator(VertexId v) const { return v < slot_of_vertex_.size() && slot_of_vertex_[v] >= 0; }

std::size_t RestrictedCayley::letter_slot(Letter x) const {
    if (!is_generator(x.vertex)) throw DomainError("letter is not a Cayley generator");
    return 2 * static_cast<std::size_t>(slot_of_vertex_[x.vertex]) + (x.inverse ? 1 : 0);
}

RestrictedCayley::Node RestrictedCayley::node_of(const Word& canonical) {
    if (canonical.size() > radius_) return kTrap;
    if (auto it = index_.find(canonical); it != index_.end()) return it->second;
    auto id = static_cast<Node>(elements_.size());
    elements_.push_back(canonical);
    index_.emplace(canonical, id);
    succ_.emplace_back(2 * generators_.size(), kUnknown);
    return id;
}

RestrictedCayley::Node RestrictedCayley::step(Node n, Letter x) {
    if (n == kTrap) return kTrap;
    std::size_t slot = letter_slot(x);
    if (succ_[n][slot] != kUnknown) return succ_[n][slot];
    Node to = node_of(multiply(*graph_, elements_[n], x));
    succ_[n][slot] = to;
    return to;
}

std::size_t RestrictedCayley::length(Node n) const {
    if (n == kTrap) return radius_ + 1;
    return elements_.at(n).size();
}

void RestrictedCayley::expand_all() {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        for (VertexId v : generators_) {
            step(static_cast<Node>(i), Letter{v, false});
            step(static_cast<Node>(i), Letter{v, true});
        }
}

}  // namespace valence
