#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "valence/monoid.hpp"

namespace valence {

using StateId = std::uint32_t;

enum class Owner { Exists, Forall };

const char* owner_code(Owner o);
Owner parse_owner(std::string_view code);

struct Transition {
    StateId from = 0;
    Word label;
    StateId to = 0;
};

// Viability game arena: states owned by the two players and transitions
// labeled by words over a presentation graph. At most one transition per
// ordered pair of states.
class GameArena {
public:
    explicit GameArena(PresentationGraph g);
    explicit GameArena(std::shared_ptr<const PresentationGraph> g);

    const PresentationGraph& graph() const { return *graph_; }
    const std::shared_ptr<const PresentationGraph>& graph_ptr() const { return graph_; }

    StateId add_state(std::string name, Owner owner, std::string note = {});
    // Adds a state named base#k for the least unused k.
    StateId fresh_state(std::string_view base, Owner owner, std::string note = {});
    void add_transition(StateId from, Word label, StateId to);
    // Like add_transition, but a taken pair is bypassed by a fresh state owned
    // by the owner of `from`, entered by `label` and left by the empty word.
    void connect(StateId from, Word label, StateId to);
    bool has_transition(StateId from, StateId to) const;

    std::size_t state_count() const { return names_.size(); }
    const std::string& state_name(StateId s) const { return names_.at(s); }
    Owner owner(StateId s) const { return owners_.at(s); }
    const std::string& note(StateId s) const { return notes_.at(s); }
    void set_note(StateId s, std::string note) { notes_.at(s) = std::move(note); }
    std::optional<StateId> find_state(std::string_view name) const;
    StateId state_index(std::string_view name) const;

    StateId initial() const { return initial_; }
    void set_initial(StateId s);

    const std::vector<Transition>& transitions() const { return transitions_; }
    // Transition indices grouped by source state, in insertion order.
    std::vector<std::vector<std::size_t>> out_edges() const;

    nlohmann::json to_json() const;
    static GameArena from_json(const nlohmann::json& j);
    std::string to_dot() const;

private:
    static std::uint64_t pair_key(StateId a, StateId b) { return (std::uint64_t{a} << 32) | b; }

    std::shared_ptr<const PresentationGraph> graph_;
    std::vector<std::string> names_;
    std::vector<Owner> owners_;
    std::vector<std::string> notes_;
    std::unordered_map<std::string, StateId> index_;
    std::vector<Transition> transitions_;
    std::unordered_set<std::uint64_t> pairs_;
    StateId initial_ = 0;
    bool has_initial_ = false;
};

struct Diagnostics {
    std::vector<std::string> errors;
    std::vector<StateId> dead_ends;
    bool ok() const { return errors.empty() && dead_ends.empty(); }
};

Diagnostics validate(const GameArena& a);

// Copy of the arena over another graph, every label rewritten by `relabel`.
GameArena relabel_arena(const GameArena& a, std::shared_ptr<const PresentationGraph> g,
                        const std::function<Word(const Word&)>& relabel);

// Splits labels of length >= 2 into chains of single-letter transitions.
GameArena normalize_letters(const GameArena& a);

// Fresh initial state whose only move applies `credit` and enters the old initial state.
GameArena encode_initial_credit(const GameArena& a, const Word& credit);

// A push is a single plain letter on a loop-free vertex, a pop a single barred one.
bool is_push_label(const PresentationGraph& g, const Word& label);
bool is_pop_label(const PresentationGraph& g, const Word& label);

// Existential pushes p -u-> q become p -eps-> p' -u-> q with p' universal. Expects single-letter labels.
GameArena pushes_to_universal(const GameArena& a);

// Dead ends lose for the existential player. With a loop-free vertex a they get
// an a- self-loop. Over a pure group graph the universal attractor of the dead
// ends is removed instead; if it contains the initial state, the arena is
// replaced by a universal sink over a fresh loop-free vertex.
GameArena eliminate_dead_ends(const GameArena& a);

// States from which the universal player forces a dead end, ignoring storage.
std::vector<char> dead_end_attractor(const GameArena& a);

// Deletes the given vertices from the graph and their letters from every label.
GameArena strip_vertices(const GameArena& a, const std::vector<VertexId>& vertices);

// Re-encodes k pushdown letters u_1..u_k by the single letter u_1 and words
// u^i g u^i, with g the least looped vertex outside `pushdown` (a fresh
// isolated looped vertex when there is none). Other loop-free vertices are kept.
GameArena to_single_stack_letter(const GameArena& a, const std::vector<VertexId>& pushdown);

}  // namespace valence
