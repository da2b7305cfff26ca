#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "valence/arena.hpp"
#include "valence/solver_fv.hpp"

namespace valence {

// D_i over letters 1..m: at most one i between two consecutive letters from
// {1..i-1} or the word ends. Smaller letters reset, larger letters are ignored.
struct CountingDfa {
    enum State : int { Fresh = 0, Used = 1, Dead = 2 };

    std::size_t index = 1;
    std::size_t letters = 1;

    State step(State s, std::size_t letter) const;
    static bool accepting(State s) { return s != Dead; }
    bool accepts(const std::vector<std::size_t>& word) const;
};

std::vector<CountingDfa> build_counting_dfas(std::size_t m);

struct LongestWord {
    std::vector<std::size_t> word;
    // Number of distinct words of maximal length in the intersection.
    std::size_t count = 0;
};

// Longest word accepted by every DFA, by longest-path search in the product,
// which is acyclic away from the dead states.
LongestWord longest_common_word(const std::vector<CountingDfa>& dfas);

// (maximal number of pushes, maximal group length per segment) of a winning
// credit that exists whenever any credit wins; n is the state count of the
// single-stack-letter normal form.
std::pair<std::size_t, std::size_t> credit_bound(std::size_t n);
std::pair<std::size_t, std::size_t> credit_bound(const GameArena& a);

// Normal form used for unknown credit: central factor removed, one stack
// letter, single-letter labels, pushes universal, no dead ends.
GameArena prepare_for_unknown_credit(const GameArena& a);

// Arena in which the existential player first stacks a credit of bounded shape
// under universal challenges and then plays a copy of `prepared` whose stack
// letter is split into n letters. Expects the output of prepare_for_unknown_credit.
GameArena build_guess_arena(const GameArena& prepared, std::size_t n);

struct UvOptions {
    SolverOptions fv;
    bool want_witness = false;
    std::size_t witness_limit = 200000;  // candidate credits tried at most
};

struct UvVerdict {
    Winner winner = Winner::Exists;
    std::size_t n = 0;
    std::size_t guess_states = 0;
    std::size_t rounds = 0;
    std::optional<Word> witness;
    std::size_t candidates_tried = 0;
};

UvVerdict solve_uv(const GameArena& a, const UvOptions& options = {});

}  // namespace valence
