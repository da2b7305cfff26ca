#include "valence/solver_uv.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <string>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "valence/classify.hpp"
#include "valence/errors.hpp"
#include "valence/oracle.hpp"

namespace valence {

CountingDfa::State CountingDfa::step(State s, std::size_t letter) const {
    if (s == Dead) return Dead;
    if (letter < index) return Fresh;
    if (letter > index) return s;
    return s == Fresh ? Used : Dead;
}

bool CountingDfa::accepts(const std::vector<std::size_t>& word) const {
    State s = Fresh;
    for (std::size_t x : word) s = step(s, x);
    return accepting(s);
}

std::vector<CountingDfa> build_counting_dfas(std::size_t m) {
    if (m == 0) throw DomainError("counting DFAs need at least one letter");
    std::vector<CountingDfa> out;
    for (std::size_t i = 1; i <= m; ++i) out.push_back(CountingDfa{i, m});
    return out;
}

LongestWord longest_common_word(const std::vector<CountingDfa>& dfas) {
    if (dfas.empty()) return {};
    const std::size_t m = dfas.front().letters;
    if (m > 40) throw ResourceError("product of counting DFAs too large");
    using Tuple = std::vector<CountingDfa::State>;
    auto encode = [](const Tuple& t) {
        std::uint64_t k = 0;
        for (auto s : t) k = k * 3 + static_cast<std::uint64_t>(s);
        return k;
    };
    struct Memo {
        std::size_t length = 0;
        std::size_t count = 1;
        std::size_t letter = 0;  // first letter of the least longest word, 0 at the end
        Tuple next;
    };
    std::unordered_map<std::uint64_t, Memo> memo;
    std::function<const Memo&(const Tuple&)> best = [&](const Tuple& t) -> const Memo& {
        const std::uint64_t key = encode(t);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        Memo r;
        for (std::size_t x = 1; x <= m; ++x) {
            Tuple u(t.size());
            bool alive = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                u[i] = dfas[i].step(t[i], x);
                alive = alive && CountingDfa::accepting(u[i]);
            }
            if (!alive) continue;
            const Memo& sub = best(u);
            if (sub.length + 1 > r.length || r.letter == 0) {
                r.length = sub.length + 1;
                r.count = sub.count;
                r.letter = x;
                r.next = u;
            } else if (sub.length + 1 == r.length) {
                r.count += sub.count;
            }
        }
        return memo.emplace(key, std::move(r)).first->second;
    };
    LongestWord out;
    Tuple t(dfas.size(), CountingDfa::Fresh);
    out.count = best(t).count;
    for (;;) {
        const Memo& r = memo.at(encode(t));
        if (r.letter == 0) break;
        out.word.push_back(r.letter);
        t = r.next;
    }
    return out;
}

std::pair<std::size_t, std::size_t> credit_bound(std::size_t n) {
    const std::size_t pushes = n >= std::numeric_limits<std::size_t>::digits ? std::numeric_limits<std::size_t>::max()
                                                                              : (std::size_t{1} << n) - 1;
    return {pushes, n};
}

GameArena prepare_for_unknown_credit(const GameArena& a) {
    return prepare_for_saturation(a, classify(a.graph()), Word{}, StackEncoding::SingleLetter);
}

std::pair<std::size_t, std::size_t> credit_bound(const GameArena& a) {
    return credit_bound(prepare_for_unknown_credit(a).state_count());
}

GameArena build_guess_arena(const GameArena& prepared, std::size_t n) {
    const PresentationGraph& g = prepared.graph();
    const auto stack = g.unlooped_vertices();
    if (stack.size() != 1) throw DomainError("guess arena expects exactly one stack letter");
    if (n == 0) throw DomainError("guess arena needs n >= 1");
    const VertexId gamma = stack.front();
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.adjacent(gamma, v)) throw DomainError("stack letter must not commute with anything");

    // Group vertices keep their names; the stack letter is split into n + 1 letters.
    PresentationGraph ng;
    std::vector<VertexId> renum(g.size(), 0);
    std::vector<VertexId> group;
    for (VertexId v = 0; v < g.size(); ++v)
        if (g.looped(v)) {
            renum[v] = ng.add_vertex(g.name(v), true);
            group.push_back(renum[v]);
        }
    for (auto [u, v] : g.edges()) ng.add_edge(renum[u], renum[v]);
    std::vector<VertexId> letter(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        std::string name = g.name(gamma) + std::to_string(i);
        while (ng.find(name)) name += "'";
        letter[i] = ng.add_vertex(name, false);
    }
    auto graph = std::make_shared<const PresentationGraph>(std::move(ng));
    GameArena out(graph);
    auto push = [&](std::size_t i) { return Word{Letter{letter[i], false}}; };
    auto pop = [&](std::size_t i) { return Word{Letter{letter[i], true}}; };

    // Copy of the game, every push and pop of the stack letter split n ways.
    std::vector<StateId> copy(prepared.state_count());
    for (StateId q = 0; q < prepared.state_count(); ++q)
        copy[q] = out.add_state(prepared.state_name(q), prepared.owner(q), prepared.note(q));
    for (const Transition& t : prepared.transitions()) {
        const StateId from = copy[t.from], to = copy[t.to];
        if (is_push_label(g, t.label)) {
            for (std::size_t i = 1; i <= n; ++i) out.connect(from, push(i), to);
        } else if (is_pop_label(g, t.label)) {
            StateId chooser = from;
            if (prepared.owner(t.from) == Owner::Forall) {
                // The universal player commits to the pop; the existential player names the letter.
                chooser = out.fresh_state(prepared.state_name(t.from) + ".pop", Owner::Exists, "pop letter choice");
                out.add_transition(from, Word{}, chooser);
            }
            for (std::size_t i = 1; i <= n; ++i) out.connect(chooser, pop(i), to);
        } else {
            Word label;
            for (Letter x : t.label) label.push_back({renum[x.vertex], x.inverse});
            out.add_transition(from, std::move(label), to);
        }
    }

    auto state = [&](const std::string& name, Owner o, const std::string& note) {
        return out.find_state(name) ? out.fresh_state(name, o, note) : out.add_state(name, o, note);
    };
    // Chain of `slack` steps, each applying one group letter or nothing; returns (entry, exit).
    const std::size_t slack = group.empty() ? 0 : n;
    auto chain = [&](const std::string& base, const std::string& note) {
        std::vector<StateId> c;
        for (std::size_t j = 0; j <= slack; ++j) c.push_back(state(base + "." + std::to_string(j), Owner::Exists, note));
        for (std::size_t j = 1; j <= slack; ++j) {
            out.add_transition(c[j - 1], Word{}, c[j]);
            for (VertexId v : group)
                for (bool inv : {true, false}) out.connect(c[j - 1], Word{Letter{v, inv}}, c[j]);
        }
        return std::pair{c.front(), c.back()};
    };

    const StateId init = state("guess.init", Owner::Exists, "pushes the bottom marker");
    auto [p0, pn] = chain("guess.p", "credit segment");
    const StateId ch = state("guess.ch", Owner::Forall, "challenge");
    const StateId smiley = state("guess.smiley", Owner::Exists, "challenge won");
    const StateId sadey = state("guess.sadey", Owner::Exists, "challenge lost");
    out.add_transition(init, push(0), p0);
    out.connect(pn, Word{}, copy[prepared.initial()]);
    for (std::size_t i = 1; i <= n; ++i) out.connect(pn, push(i), ch);
    out.add_transition(ch, Word{}, p0);
    out.add_transition(smiley, Word{}, smiley);
    out.add_transition(sadey, pop(0), sadey);

    const auto dfas = build_counting_dfas(n);
    for (const auto& dfa : dfas) {
        const std::string base = "guess.d" + std::to_string(dfa.index);
        std::pair<StateId, StateId> node[2] = {chain(base + ".fresh", "counter " + std::to_string(dfa.index) + " fresh"),
                                               chain(base + ".used", "counter " + std::to_string(dfa.index) + " used")};
        out.add_transition(ch, Word{}, node[0].first);
        for (int s = 0; s < 2; ++s) {
            const StateId exit = node[s].second;
            out.connect(exit, pop(0), smiley);
            for (std::size_t j = 1; j <= n; ++j) {
                auto next = dfa.step(static_cast<CountingDfa::State>(s), j);
                out.connect(exit, pop(j), next == CountingDfa::Dead ? sadey : node[next].first);
            }
        }
    }
    out.set_initial(init);
    return out;
}

UvVerdict solve_uv(const GameArena& a, const UvOptions& options) {
    ClassReport cls = classify(a.graph());
    if (cls.kind == ClassKind::Undecidable || cls.kind == ClassKind::VassTimesGrp) {
        solve_fv(a, Word{}, options.fv);  // throws with the explanation
    }
    UvVerdict v;
    if (cls.kind == ClassKind::Grp) {
        v.winner = dead_end_attractor(a)[a.initial()] ? Winner::Forall : Winner::Exists;
        if (v.winner == Winner::Exists && options.want_witness) v.witness = Word{};
        return v;
    }
    GameArena prepared = prepare_for_saturation(a, cls, Word{}, StackEncoding::SingleLetter);
    v.n = prepared.state_count();
    GameArena guess = build_guess_arena(prepared, v.n);
    v.guess_states = guess.state_count();
    spdlog::debug("guess arena: n = {}, {} states", v.n, v.guess_states);
    FvVerdict fv = solve_fv(guess, Word{}, options.fv);
    v.winner = fv.winner;
    v.rounds = fv.rounds;
    if (v.winner == Winner::Exists && options.want_witness) {
        auto [pushes, group] = credit_bound(v.n);
        for_each_credit_candidate(a, pushes, group, [&](const Word& c) {
            ++v.candidates_tried;
            if (solve_fv(a, c, options.fv).winner == Winner::Exists) {
                v.witness = c;
                return false;
            }
            return v.candidates_tried < options.witness_limit;
        });
    }
    return v;
}

}  // namespace valence
