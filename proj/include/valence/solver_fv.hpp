#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "valence/arena.hpp"
#include "valence/classify.hpp"
#include "valence/monoid.hpp"
#include "valence/state_set.hpp"

namespace valence {

enum class Winner { Exists, Forall };
const char* winner_code(Winner w);

enum class StackEncoding { Native, SingleLetter };

struct SolverOptions {
    std::size_t max_antichain = 1u << 14;
    StackEncoding stack_encoding = StackEncoding::Native;
    bool want_certificate = false;
    std::size_t max_certificate_nodes = 200000;
    // Compute the families of every (stack letter, state) root, not only those reachable from the initial state.
    bool all_roots = false;
    bool record_history = false;
};

struct FvVerdict {
    Winner winner = Winner::Exists;
    std::size_t rounds = 0;
    std::size_t cayley_nodes = 0;
    std::optional<nlohmann::json> certificate;
};

// Runs the normalization pipeline up to the point where saturation applies:
// credit, removal of the central group factor, optional single-letter
// encoding, single-letter labels, pushes owned by the universal player, no dead ends.
GameArena prepare_for_saturation(const GameArena& a, const ClassReport& cls, const Word& credit,
                                 StackEncoding encoding = StackEncoding::Native);

// Least fixpoint over (root stack letter, state, Cayley node) whose value is
// the antichain of minimal leaf sets of finite universal strategy trees that
// stay at the current stack height and end every branch with its first pop.
// The extra root letter `bottom()` matches no pop: it models the empty stack.
class Saturation {
public:
    Saturation(const GameArena& prepared, SolverOptions options = {});

    void run();

    std::size_t rounds() const { return rounds_; }
    std::size_t stack_letter_count() const { return stack_letters_.size(); }
    std::size_t bottom() const { return stack_letters_.size(); }
    // Stack-letter index of a loop-free vertex.
    std::size_t stack_index(VertexId v) const;
    std::size_t trap_threshold(StateId q) const { return threshold_.at(q); }
    std::size_t cayley_nodes() const { return cayley_.node_count(); }
    std::size_t pair_count() const { return pairs_.size(); }
    std::size_t evaluations() const { return evaluations_; }
    const GameArena& arena() const { return arena_; }

    // Minimal leaf sets at identity for a root letter; empty when no tree exists.
    std::vector<StateSet> family(std::size_t root, StateId q) const;
    bool forall_wins_from_empty(StateId q) const;

    // Per round, families at identity for every root pair created so far, indexed by root * |Q| + q.
    const std::vector<std::vector<std::vector<StateSet>>>& history() const { return history_; }
    bool monotone() const { return monotone_; }

    // Universal strategy tree from (q, empty storage), every leaf an invalid configuration.
    nlohmann::json certificate(StateId q) const;

private:
    using Node = RestrictedCayley::Node;
    using PairId = std::uint32_t;

    struct Part {
        std::uint32_t transition = 0;
        std::uint32_t table_stamp = 0;  // shortcut entry, 0 when unused
        std::vector<std::uint32_t> children;
    };
    struct Derivation {
        PairId pair = 0;
        StateSet set;
        std::vector<Part> parts;
    };
    struct Entry {
        StateSet set;
        std::uint32_t stamp = 0;
    };
    struct Option {
        StateSet set;
        std::vector<Part> parts;
    };
    struct Pair {
        std::uint32_t root = 0;
        StateId state = 0;
        Node node = 0;
        std::vector<Entry> family;
        std::vector<PairId> dependents;
        bool queued = false;
    };

    enum class Kind { Epsilon, Group, Push, Pop };
    struct Move {
        Kind kind = Kind::Epsilon;
        Letter letter;
        std::size_t stack = 0;
        StateId to = 0;
        std::uint32_t transition = 0;
    };

    void compute_thresholds();
    PairId pair_for(std::uint32_t root, StateId q, Node c);
    Node clamp(StateId q, Node c) const;
    void depend(PairId child, PairId parent);
    void enqueue(PairId p);
    void drain();
    std::vector<Option> contribution(PairId self, const Move& m);
    void evaluate(PairId p);
    std::vector<StateSet> sets_of(PairId p) const;
    std::optional<PairId> find_pair(std::uint32_t root, StateId q, Node c) const;

    struct Frame;

    GameArena arena_;
    SolverOptions options_;
    std::size_t n_ = 0;
    std::vector<VertexId> stack_letters_;
    std::vector<int> stack_of_vertex_;
    std::vector<std::vector<Move>> moves_;
    std::vector<std::size_t> threshold_;
    RestrictedCayley cayley_;

    std::vector<Pair> pairs_;
    std::vector<std::unordered_map<Node, PairId>> index_;  // by root * n + state
    std::vector<PairId> worklist_;
    std::size_t worklist_head_ = 0;
    std::unordered_set<std::uint64_t> dep_seen_;
    std::vector<std::vector<PairId>> pairs_at_state_;

    // Shortcut table: entries of the previous round at (letter, state, identity).
    std::vector<std::vector<Entry>> table_;  // by letter * n + state
    std::vector<Derivation> log_;            // index = stamp
    std::uint32_t clock_ = 0;

    std::size_t rounds_ = 0;
    std::size_t evaluations_ = 0;
    bool monotone_ = true;
    bool done_ = false;
    std::vector<std::vector<std::vector<StateSet>>> history_;
};

// Fixed initial credit. Requires a Grp or PD(Grp) x Grp graph.
FvVerdict solve_fv(const GameArena& a, const Word& credit, const SolverOptions& options = {});

}  // namespace valence
