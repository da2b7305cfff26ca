#pragma once

#include <string>
#include <vector>

#include "valence/arena.hpp"

namespace fixtures {

// The Z x Z pushdown game with states q0..q5 (q2 universal): a is the stack
// letter, x and y generate the two coordinates.
valence::GameArena zxz_arena();

// Graph from a compact description: vertices "a", "x*" (looped), edges "a-b".
valence::PresentationGraph make_graph(const std::vector<std::string>& vertices, const std::vector<std::string>& edges);

// Arena from a compact description. States "q0:E", transitions "q0 > q1 : a b-".
valence::GameArena make_arena(const valence::PresentationGraph& g, const std::vector<std::string>& states,
                              const std::vector<std::string>& transitions, const std::string& initial);

}  // namespace fixtures
