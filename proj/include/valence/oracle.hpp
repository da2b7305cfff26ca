#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "valence/arena.hpp"
#include "valence/monoid.hpp"

namespace valence {

enum class Objective { Rio, NonTermination };

struct OracleBudget {
    std::size_t max_configs = 200000;
    std::size_t max_depth = 100000;
    // Longer storage words are left unexplored.
    std::size_t max_storage = 256;
};

struct OracleVerdict {
    enum class Kind { ForallWins, ExistsWins, Unknown };
    Kind kind = Kind::Unknown;
    // Attractor rank of the initial configuration when the universal player wins.
    std::size_t depth = 0;
    std::size_t explored = 0;
    std::size_t depth_bound = 0;
    // Unknown verdicts cut only by max_depth: the universal player cannot
    // force a losing configuration within this many steps.
    std::size_t survival = 0;

    bool certified() const { return kind != Kind::Unknown; }
    std::string describe() const;
};

// Explicit-state exploration from (initial, [storage]) followed by a universal
// attractor computation. Unexplored frontier configurations never join the
// attractor and block an existential verdict.
//   Rio: targets are configurations that are not right-invertible, and dead ends.
//   NonTermination: only valid configurations exist; targets have no valid successor.
OracleVerdict bounded_solve(const GameArena& a, StateId initial, const Word& storage, const OracleBudget& budget,
                            Objective objective);
OracleVerdict bounded_solve_rio(const GameArena& a, const Word& credit, const OracleBudget& budget = {});
OracleVerdict bounded_solve_nontermination(const GameArena& a, const Word& credit, const OracleBudget& budget = {});

// Credits u_1 w_1 ... u_r w_r with u_i loop-free stack letters and w_i
// canonical elements over the non-central looped vertices, r <= max_pushes,
// |w_i| <= max_group_len, ordered by total length then lexicographically.
// A leading group segment is omitted: below the first stack letter it can never be popped.
// Visits candidates in that order until `visit` returns false.
void for_each_credit_candidate(const GameArena& a, std::size_t max_pushes, std::size_t max_group_len,
                               const std::function<bool(const Word&)>& visit);
std::vector<Word> credit_candidates(const GameArena& a, std::size_t max_pushes, std::size_t max_group_len, std::size_t limit);

struct CreditSearch {
    std::optional<Word> credit;  // first certified existential win
    std::vector<Word> winners;   // every certified win, when collecting
    std::size_t tried = 0;
    std::size_t forall = 0;
    std::size_t unknown = 0;
    bool truncated = false;      // candidate limit reached
};

CreditSearch enumerate_uv_credits(const GameArena& a, std::size_t max_pushes, std::size_t max_group_len,
                                  const OracleBudget& budget, std::size_t limit = 100000, bool collect_all = false);

}  // namespace valence
