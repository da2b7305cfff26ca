#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "valence/arena.hpp"
#include "valence/oracle.hpp"

namespace valence {

// ---- two-counter machines ----

enum class CounterOp { Inc, Dec, Zero };

const char* counter_op_name(CounterOp op);

struct CounterTransition {
    std::size_t from = 0;
    CounterOp op = CounterOp::Inc;
    int counter = 1;  // 1 or 2
    std::size_t to = 0;
};

struct CounterMachine {
    std::vector<std::string> states;
    std::size_t initial = 0;
    std::vector<CounterTransition> transitions;

    std::size_t state_index(const std::string& name) const;
    std::string describe(const CounterTransition& t) const;

    // Throws InputError unless every state has an outgoing transition.
    void check() const;

    nlohmann::json to_json() const;
    static CounterMachine from_json(const nlohmann::json& j);
};

struct RunAnalysis {
    enum class Kind { Infinite, Finite, Unknown };
    Kind kind = Kind::Unknown;
    std::size_t configs = 0;
};

// Whether some run from (initial, 0, 0) is infinite, by exhaustive search of
// the reachable configurations. Counters range over N (dec needs a positive
// counter) or, with `integer_counters`, over Z (dec always enabled). A cycle
// proves an infinite run; a finite closed configuration space proves there is
// none. Unknown when more than `max_configs` configurations are reachable.
RunAnalysis analyze_runs(const CounterMachine& m, bool integer_counters = false, std::size_t max_configs = 100000);

// Storage graphs of the undecidable families, vertices named a, b, c left to right.
//   (i):  a isolated, b loop-free, c looped, edge b-c
//   (ii): a isolated, b and c loop-free, edge b-c
PresentationGraph illegal_graph_i(bool loop_on_a);
PresentationGraph illegal_graph_ii(bool loop_on_a);
// a loop-free and isolated; looped b1, b2 adjacent (a Z^2 between stack letters).
PresentationGraph pdzvass_graph();

// Counter k is the number of b (counter 1) resp. c (counter 2) above the
// initial b a. Zero tests go through a universal challenge state whose
// existential check state drains the other counter and then pops a- b-.
// Check states are named "<from>.t<index>.check".
GameArena cm_to_game_ii(const CounterMachine& m, bool loop_on_a = false);

// Counters (m1, m2) are stored as b a b^(m1+m2) c^m2: inc(1) = b, inc(2) = b c.
// Decrements and zero tests are both challenged.
GameArena cm_to_game_i(const CounterMachine& m, bool loop_on_a = false);

struct CompiledGame {
    GameArena arena;
    Objective objective;
};

// Machine with Z-valued counters over pdzvass_graph(), played under the
// non-termination objective. All states are existential except the zero-test
// gadgets, which are universal.
CompiledGame cm_to_nontermination_pdzvass(const CounterMachine& m);

// ---- pushdown and pushdown energy games ----

// Rule (from, top) -> (to, push) with an energy update per dimension. The
// pushed word replaces the top symbol; its last letter becomes the new top.
struct PushdownRule {
    std::size_t from = 0;
    std::size_t top = 0;
    std::size_t to = 0;
    std::vector<std::size_t> push;
    std::vector<int> effect;  // size == dimension, entries in {-1, 0, 1}
};

// Plays are lost by the existential player when some energy component becomes
// negative or when she is stuck; a stuck universal player loses. Every other
// play, in particular every infinite one, is won by the existential player.
// Dimension 0 is a plain pushdown game.
struct PushdownGame {
    std::vector<std::string> states;
    std::vector<Owner> owners;
    std::vector<std::string> alphabet;
    std::size_t dimension = 0;
    std::vector<PushdownRule> rules;
    std::size_t initial = 0;
    std::vector<std::size_t> initial_stack;  // bottom first
    std::vector<std::int64_t> initial_energy;

    void check() const;
    nlohmann::json to_json() const;
    static PushdownGame from_json(const nlohmann::json& j);
};

// Arena over a graph with one fresh bottom letter plus the stack alphabet as
// independent loop-free vertices, and one loop-free vertex per dimension, the
// latter forming a clique adjacent to every stack letter. The initial move
// pushes the bottom letter, the initial stack and the initial energy. Universal
// rules p -> q become p -eps-> p' -> q with p' existential, and p' may pop any
// other stack letter into an existential sink with an eps self-loop.
GameArena energy_pushdown_to_viability(const PushdownGame& e);
// Same translation; requires dimension 0.
GameArena pushdown_game_to_viability(const PushdownGame& p);

// Inverse direction for arenas over a graph whose loop-free vertices split
// into independent stack letters and a clique of counters adjacent to all of
// them, without looped vertices. Universal pops go through an existential
// state that may instead enter a stuck existential trap. The credit must be
// right-invertible.
PushdownGame viability_to_pushdown_game(const GameArena& a, const Word& credit = {});

// Arena over the induced path a-b-c of loop-free vertices, relabeled over the
// same path with `c` looped: c becomes c a c and c- becomes c- a- c-. `c` must
// be an endpoint of the path.
GameArena relabel_iii_to_iv(const GameArena& a, VertexId c);
// Uses the endpoint with the larger index.
GameArena relabel_iii_to_iv(const GameArena& a);

}  // namespace valence
