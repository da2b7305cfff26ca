#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

namespace valence {

using VertexId = std::uint32_t;

struct Letter {
    VertexId vertex = 0;
    bool inverse = false;

    // Order used by the canonical form: vertex index first, barred before plain.
    std::uint64_t key() const { return (std::uint64_t{vertex} << 1) | (inverse ? 0u : 1u); }
    Letter bar() const { return {vertex, !inverse}; }

    friend bool operator==(const Letter&, const Letter&) = default;
    friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) { return a.key() <=> b.key(); }
};

using Word = std::vector<Letter>;

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept;
};

// Undirected graph with optional self-loops. Loop-free vertices behave like
// bicyclic generators (x x- = 1 only), looped vertices like group generators.
class PresentationGraph {
public:
    VertexId add_vertex(std::string name, bool looped);
    void add_edge(VertexId u, VertexId v);
    void add_edge(std::string_view u, std::string_view v);

    std::size_t size() const { return names_.size(); }
    const std::string& name(VertexId v) const { return names_.at(v); }
    bool looped(VertexId v) const { return looped_.at(v) != 0; }
    bool adjacent(VertexId u, VertexId v) const { return u != v && adj_[u][v] != 0; }
    // Letters on distinct adjacent vertices commute; letters on one vertex never swap.
    bool commute(Letter x, Letter y) const { return x.vertex != y.vertex && adj_[x.vertex][y.vertex] != 0; }
    std::optional<VertexId> find(std::string_view name) const;
    VertexId index_of(std::string_view name) const;
    std::vector<std::pair<VertexId, VertexId>> edges() const;
    std::vector<VertexId> looped_vertices() const;
    std::vector<VertexId> unlooped_vertices() const;

    // "a" is the generator, "a-" its bar. Words are whitespace separated; "", "eps" and "ε" denote the empty word.
    Letter parse_letter(std::string_view token) const;
    Word parse_word(std::string_view text) const;
    std::string format_letter(Letter x) const;
    std::string format_word(const Word& w) const;

    nlohmann::json to_json() const;
    static PresentationGraph from_json(const nlohmann::json& j);

    friend bool operator==(const PresentationGraph& a, const PresentationGraph& b) {
        return a.names_ == b.names_ && a.looped_ == b.looped_ && a.adj_ == b.adj_;
    }

private:
    std::vector<std::string> names_;
    std::vector<char> looped_;
    std::vector<std::vector<char>> adj_;
    std::unordered_map<std::string, VertexId> index_;
};

// x y = 1 for adjacent letters x (left) and y (right).
inline bool cancels(const PresentationGraph& g, Letter left, Letter right) {
    return left.vertex == right.vertex && left.inverse != right.inverse && (!left.inverse || g.looped(left.vertex));
}

// Appends one letter to a reduced trace, keeping it reduced. Order is not canonical afterwards.
void append_reduced(const PresentationGraph& g, Word& trace, Letter x);
// Appends one letter to a canonical word, keeping it canonical.
void append_canonical(const PresentationGraph& g, Word& canonical, Letter x);
// Lexicographically least linearization of a reduced trace.
Word canonical_order(const PresentationGraph& g, const Word& trace);
// Canonical form of an arbitrary word.
Word reduce_word(const PresentationGraph& g, const Word& w);
// Canonical form of canonical * w.
Word multiply(const PresentationGraph& g, const Word& canonical, const Word& w);
Word multiply(const PresentationGraph& g, const Word& canonical, Letter x);
// Right-invertible iff the canonical form carries no barred letter on a loop-free vertex.
bool is_right_invertible(const PresentationGraph& g, const Word& canonical);
// Formal inverse: reversed word with every letter barred. A right inverse when the word is right-invertible.
Word formal_inverse(const Word& w);
// Length of a geodesic; defined only for elements over looped vertices.
std::size_t geodesic_length(const PresentationGraph& g, const Word& canonical);

// Canonical element bound to a graph that must outlive it.
class MonoidElement {
public:
    MonoidElement(const PresentationGraph& g, const Word& w) : graph_(&g), trace_(reduce_word(g, w)) {}
    static MonoidElement identity(const PresentationGraph& g) { return MonoidElement(g, Word{}); }

    const Word& trace() const { return trace_; }
    const PresentationGraph& graph() const { return *graph_; }
    bool is_identity() const { return trace_.empty(); }
    bool right_invertible() const { return is_right_invertible(*graph_, trace_); }
    std::size_t geodesic_length() const { return valence::geodesic_length(*graph_, trace_); }
    std::string to_string() const { return graph_->format_word(trace_); }

    MonoidElement operator*(const MonoidElement& other) const;
    MonoidElement operator*(const Word& w) const;

    friend bool operator==(const MonoidElement& a, const MonoidElement& b) { return a.trace_ == b.trace_; }

private:
    const PresentationGraph* graph_;
    Word trace_;
};

MonoidElement reduce(const Word& w, const PresentationGraph& g);

// Ball of the Cayley graph of the group generated by some looped vertices,
// plus one absorbing trap node for everything outside the ball. Nodes are
// created on demand; expand_all() materializes the whole ball.
class RestrictedCayley {
public:
    using Node = std::uint32_t;
    static constexpr Node kTrap = std::numeric_limits<Node>::max();

    RestrictedCayley(const PresentationGraph& g, std::vector<VertexId> generators, std::size_t radius);
    static RestrictedCayley build(const PresentationGraph& g, std::vector<VertexId> generators, std::size_t radius);

    Node identity() const { return 0; }
    Node trap() const { return kTrap; }
    Node step(Node n, Letter x);
    // Node for an element, or the trap if it lies outside the ball.
    Node node_of(const Word& canonical);
    std::size_t length(Node n) const;
    const Word& element(Node n) const { return elements_.at(n); }
    bool is_generator(VertexId v) const;
    std::size_t radius() const { return radius_; }
    // Materialized nodes including the trap.
    std::size_t node_count() const { return elements_.size() + 1; }
    void expand_all();

private:
    std::size_t letter_slot(Letter x) const;

    const PresentationGraph* graph_;
    std::vector<VertexId> generators_;
    std::vector<int> slot_of_vertex_;
    std::size_t radius_;
    std::vector<Word> elements_;
    std::unordered_map<Word, Node, WordHash> index_;
    std::vector<std::vector<Node>> succ_;  // kUnknown until computed
};

}  // namespace valence
