#include "fixtures.hpp"

#include <stdexcept>

using namespace valence;

namespace fixtures {

PresentationGraph make_graph(const std::vector<std::string>& vertices, const std::vector<std::string>& edges) {
    PresentationGraph g;
    for (std::string v : vertices) {
        bool looped = !v.empty() && v.back() == '*';
        if (looped) v.pop_back();
        g.add_vertex(v, looped);
    }
    for (const auto& e : edges) {
        auto dash = e.find('-');
        if (dash == std::string::npos) throw std::invalid_argument("edge needs '-': " + e);
        g.add_edge(e.substr(0, dash), e.substr(dash + 1));
    }
    return g;
}

GameArena make_arena(const PresentationGraph& g, const std::vector<std::string>& states,
                     const std::vector<std::string>& transitions, const std::string& initial) {
    GameArena a(g);
    for (const auto& s : states) {
        auto colon = s.find(':');
        a.add_state(s.substr(0, colon), parse_owner(s.substr(colon + 1)));
    }
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(' ');
        auto e = s.find_last_not_of(' ');
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    for (const auto& t : transitions) {
        auto gt = t.find('>');
        auto colon = t.find(':');
        std::string from = trim(t.substr(0, gt));
        std::string to = trim(t.substr(gt + 1, colon == std::string::npos ? std::string::npos : colon - gt - 1));
        std::string label = colon == std::string::npos ? "" : t.substr(colon + 1);
        a.connect(a.state_index(from), a.graph().parse_word(label), a.state_index(to));
    }
    a.set_initial(a.state_index(initial));
    return a;
}

GameArena zxz_arena() {
    PresentationGraph g = make_graph({"a", "x*", "y*"}, {"x-y"});
    return make_arena(g, {"q0:E", "q1:E", "q2:A", "q3:E", "q4:E", "q5:E"},
                      {"q0 > q1 : y", "q1 > q2 : a-", "q2 > q2 : a", "q2 > q3 : x", "q2 > q3", "q3 > q4 : x-",
                       "q3 > q5", "q4 > q5", "q5 > q5 : a-", "q5 > q2"},
                      "q0");
}

}  // namespace fixtures
