#include "valence/reductions.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

#include "valence/classify.hpp"
#include "valence/errors.hpp"

namespace valence {

namespace {

Word letters(std::initializer_list<Letter> xs) { return Word(xs); }

std::string unique_vertex_name(const PresentationGraph& g, std::string name) {
    while (g.find(name)) name += "'";
    return name;
}

StateId named_state(GameArena& a, const std::string& name, Owner o, const std::string& note) {
    return a.find_state(name) ? a.fresh_state(name, o, note) : a.add_state(name, o, note);
}

CounterOp parse_op(const std::string& s) {
    if (s == "inc") return CounterOp::Inc;
    if (s == "dec") return CounterOp::Dec;
    if (s == "zero") return CounterOp::Zero;
    throw InputError("unknown counter operation '" + s + "'");
}

// Machine states become existential states; returns their ids and the arena's initial state.
struct MachineFrame {
    std::vector<StateId> q;
    StateId init = 0;
};

MachineFrame machine_frame(GameArena& out, const CounterMachine& m, const Word& start_label,
                           const std::string& start_note) {
    m.check();
    MachineFrame f;
    f.init = named_state(out, "init", Owner::Exists, start_note);
    for (const auto& s : m.states) f.q.push_back(named_state(out, s, Owner::Exists, "machine state " + s));
    out.add_transition(f.init, start_label, f.q[m.initial]);
    out.set_initial(f.init);
    return f;
}

std::string gadget_base(const CounterMachine& m, std::size_t index) {
    return m.states[m.transitions[index].from] + ".t" + std::to_string(index);
}

}  // namespace

const char* counter_op_name(CounterOp op) {
    switch (op) {
        case CounterOp::Inc: return "inc";
        case CounterOp::Dec: return "dec";
        case CounterOp::Zero: return "zero";
    }
    return "?";
}

std::size_t CounterMachine::state_index(const std::string& name) const {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw InputError("unknown machine state '" + name + "'");
    return static_cast<std::size_t>(it - states.begin());
}

std::string CounterMachine::describe(const CounterTransition& t) const {
    return states.at(t.from) + " -" + counter_op_name(t.op) + "(" + std::to_string(t.counter) + ")-> " + states.at(t.to);
}

void CounterMachine::check() const {
    if (states.empty()) throw InputError("counter machine has no states");
    if (initial >= states.size()) throw InputError("initial machine state out of range");
    std::set<std::string> names(states.begin(), states.end());
    if (names.size() != states.size()) throw InputError("duplicate machine state name");
    std::vector<char> has_out(states.size(), 0);
    for (const auto& t : transitions) {
        if (t.from >= states.size() || t.to >= states.size()) throw InputError("machine transition out of range");
        if (t.counter != 1 && t.counter != 2) throw InputError("counter index must be 1 or 2");
        has_out[t.from] = 1;
    }
    for (std::size_t s = 0; s < states.size(); ++s)
        if (!has_out[s]) throw InputError("machine state '" + states[s] + "' has no outgoing transition");
}

nlohmann::json CounterMachine::to_json() const {
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : transitions)
        ts.push_back({{"from", states[t.from]}, {"op", counter_op_name(t.op)}, {"counter", t.counter}, {"to", states[t.to]}});
    return {{"states", states}, {"initial", states.at(initial)}, {"transitions", ts}};
}

CounterMachine CounterMachine::from_json(const nlohmann::json& j) {
    CounterMachine m;
    try {
        m.states = j.at("states").get<std::vector<std::string>>();
        m.initial = m.state_index(j.at("initial").get<std::string>());
        for (const auto& t : j.at("transitions"))
            m.transitions.push_back({m.state_index(t.at("from").get<std::string>()), parse_op(t.at("op").get<std::string>()),
                                     t.at("counter").get<int>(), m.state_index(t.at("to").get<std::string>())});
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed counter machine: ") + ex.what());
    }
    m.check();
    return m;
}

RunAnalysis analyze_runs(const CounterMachine& m, bool integer_counters, std::size_t max_configs) {
    m.check();
    using Config = std::tuple<std::size_t, std::int64_t, std::int64_t>;
    std::vector<std::vector<std::size_t>> out(m.states.size());
    for (std::size_t i = 0; i < m.transitions.size(); ++i) out[m.transitions[i].from].push_back(i);

    auto successors = [&](const Config& c) {
        std::vector<Config> next;
        for (std::size_t i : out[std::get<0>(c)]) {
            const auto& t = m.transitions[i];
            std::int64_t v[2] = {std::get<1>(c), std::get<2>(c)};
            std::int64_t& x = v[t.counter - 1];
            switch (t.op) {
                case CounterOp::Inc: ++x; break;
                case CounterOp::Dec:
                    if (!integer_counters && x == 0) continue;
                    --x;
                    break;
                case CounterOp::Zero:
                    if (x != 0) continue;
                    break;
            }
            next.emplace_back(t.to, v[0], v[1]);
        }
        return next;
    };

    // Iterative DFS; a grey successor closes a cycle.
    std::map<Config, char> colour;  // 1 grey, 2 black
    struct Frame {
        Config c;
        std::vector<Config> succ;
        std::size_t next = 0;
    };
    RunAnalysis r;
    std::vector<Frame> stack;
    Config root{m.initial, 0, 0};
    colour[root] = 1;
    stack.push_back({root, successors(root)});
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next == f.succ.size()) {
            colour[f.c] = 2;
            stack.pop_back();
            continue;
        }
        Config c = f.succ[f.next++];
        auto it = colour.find(c);
        if (it != colour.end()) {
            if (it->second == 1) {
                r.kind = RunAnalysis::Kind::Infinite;
                r.configs = colour.size();
                return r;
            }
            continue;
        }
        if (colour.size() >= max_configs) {
            r.kind = RunAnalysis::Kind::Unknown;
            r.configs = colour.size();
            return r;
        }
        colour[c] = 1;
        auto succ = successors(c);
        stack.push_back({c, std::move(succ)});
    }
    r.kind = RunAnalysis::Kind::Finite;
    r.configs = colour.size();
    return r;
}

PresentationGraph illegal_graph_i(bool loop_on_a) {
    PresentationGraph g;
    g.add_vertex("a", loop_on_a);
    g.add_vertex("b", false);
    g.add_vertex("c", true);
    g.add_edge("b", "c");
    return g;
}

PresentationGraph illegal_graph_ii(bool loop_on_a) {
    PresentationGraph g;
    g.add_vertex("a", loop_on_a);
    g.add_vertex("b", false);
    g.add_vertex("c", false);
    g.add_edge("b", "c");
    return g;
}

PresentationGraph pdzvass_graph() {
    PresentationGraph g;
    g.add_vertex("a", false);
    g.add_vertex("b1", true);
    g.add_vertex("b2", true);
    g.add_edge("b1", "b2");
    return g;
}

GameArena cm_to_game_ii(const CounterMachine& m, bool loop_on_a) {
    GameArena out(illegal_graph_ii(loop_on_a));
    const Letter a{0, false}, b{1, false}, c{2, false};
    MachineFrame f = machine_frame(out, m, letters({b, a}), "pushes the base b a");
    const StateId smiley = named_state(out, "smiley", Owner::Exists, "check passed");
    out.add_transition(smiley, Word{}, smiley);

    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
        const auto& t = m.transitions[i];
        const Letter x = t.counter == 1 ? b : c;
        const StateId from = f.q[t.from], to = f.q[t.to];
        switch (t.op) {
            case CounterOp::Inc: out.connect(from, letters({x}), to); break;
            case CounterOp::Dec: out.connect(from, letters({x.bar()}), to); break;
            case CounterOp::Zero: {
                const std::string base = gadget_base(m, i);
                const std::string note = m.describe(t);
                const StateId challenge = named_state(out, base + ".challenge", Owner::Forall, note);
                const StateId check = named_state(out, base + ".check", Owner::Exists, note);
                out.connect(from, Word{}, challenge);
                out.add_transition(challenge, Word{}, to);
                out.add_transition(challenge, Word{}, check);
                // Drain the other counter; the base is reachable only if the tested one is empty.
                const Letter other = t.counter == 1 ? c : b;
                out.add_transition(check, letters({other.bar()}), check);
                out.add_transition(check, letters({a.bar(), b.bar()}), smiley);
                break;
            }
        }
    }
    return out;
}

GameArena cm_to_game_i(const CounterMachine& m, bool loop_on_a) {
    GameArena out(illegal_graph_i(loop_on_a));
    const Letter a{0, false}, b{1, false}, c{2, false};
    MachineFrame f = machine_frame(out, m, letters({b, a}), "pushes the base b a");
    const StateId smiley = named_state(out, "smiley", Owner::Exists, "check passed");
    out.add_transition(smiley, Word{}, smiley);
    const Word unit1 = letters({b}), unit2 = letters({b, c});
    const Word pop1 = letters({b.bar()}), pop2 = letters({b.bar(), c.bar()});

    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
        const auto& t = m.transitions[i];
        const StateId from = f.q[t.from], to = f.q[t.to];
        if (t.op == CounterOp::Inc) {
            out.connect(from, t.counter == 1 ? unit1 : unit2, to);
            continue;
        }
        const std::string base = gadget_base(m, i);
        const std::string note = m.describe(t);
        const StateId challenge = named_state(out, base + ".challenge", Owner::Forall, note);
        const StateId check = named_state(out, base + ".check", Owner::Exists, note);
        if (t.op == CounterOp::Dec)
            out.connect(from, t.counter == 1 ? pop1 : pop2, challenge);
        else
            out.connect(from, Word{}, challenge);
        out.add_transition(challenge, Word{}, to);
        out.add_transition(challenge, Word{}, check);
        if (t.op == CounterOp::Dec) {
            // Legal iff the whole stack above the base can be unwound.
            out.add_transition(check, pop1, check);
            out.connect(check, pop2, check);
        } else {
            // zero(1): only pairs b c may be unwound; zero(2): only single b.
            out.add_transition(check, t.counter == 1 ? pop2 : pop1, check);
        }
        out.add_transition(check, letters({a.bar(), b.bar()}), smiley);
    }
    return out;
}

CompiledGame cm_to_nontermination_pdzvass(const CounterMachine& m) {
    GameArena out(pdzvass_graph());
    const Letter a{0, false};
    const Letter counter[2] = {{1, false}, {2, false}};
    MachineFrame f = machine_frame(out, m, letters({a}), "pushes the stack letter a");

    for (std::size_t i = 0; i < m.transitions.size(); ++i) {
        const auto& t = m.transitions[i];
        const StateId from = f.q[t.from], to = f.q[t.to];
        const Letter x = counter[t.counter - 1], y = counter[2 - t.counter];
        switch (t.op) {
            case CounterOp::Inc: out.connect(from, letters({x}), to); break;
            case CounterOp::Dec: out.connect(from, letters({x.bar()}), to); break;
            case CounterOp::Zero: {
                const std::string base = gadget_base(m, i);
                const std::string note = m.describe(t);
                const StateId z = named_state(out, base + ".zero", Owner::Forall, note);
                const StateId plus = named_state(out, base + ".plus", Owner::Forall, note + ", claimed positive");
                const StateId minus = named_state(out, base + ".minus", Owner::Forall, note + ", claimed negative");
                const StateId done = named_state(out, base + ".done", Owner::Forall, note + ", challenge closed");
                out.connect(from, Word{}, z);
                out.add_transition(z, Word{}, to);
                out.add_transition(z, letters({x.bar()}), plus);
                out.add_transition(z, letters({x}), minus);
                out.add_transition(plus, letters({x.bar()}), plus);
                out.connect(plus, letters({y}), plus);
                out.connect(plus, letters({y.bar()}), plus);
                out.add_transition(minus, letters({x}), minus);
                out.connect(minus, letters({y}), minus);
                out.connect(minus, letters({y.bar()}), minus);
                out.add_transition(plus, letters({a.bar()}), done);
                out.add_transition(minus, letters({a.bar()}), done);
                out.add_transition(done, letters({a.bar()}), done);
                break;
            }
        }
    }
    return {std::move(out), Objective::NonTermination};
}

void PushdownGame::check() const {
    if (states.empty()) throw InputError("pushdown game has no states");
    if (owners.size() != states.size()) throw InputError("pushdown game needs one owner per state");
    if (initial >= states.size()) throw InputError("initial state out of range");
    if (initial_energy.size() != dimension) throw InputError("initial energy must have one entry per dimension");
    for (std::size_t x : initial_stack)
        if (x >= alphabet.size()) throw InputError("initial stack letter out of range");
    for (const auto& r : rules) {
        if (r.from >= states.size() || r.to >= states.size()) throw InputError("rule state out of range");
        if (r.top >= alphabet.size()) throw InputError("rule top symbol out of range");
        for (std::size_t x : r.push)
            if (x >= alphabet.size()) throw InputError("rule push symbol out of range");
        if (r.effect.size() != dimension) throw InputError("rule effect must have one entry per dimension");
        for (int e : r.effect)
            if (e < -1 || e > 1) throw InputError("rule effect entries must be -1, 0 or 1");
    }
}

nlohmann::json PushdownGame::to_json() const {
    nlohmann::json ss = nlohmann::json::array();
    for (std::size_t s = 0; s < states.size(); ++s) ss.push_back({{"name", states[s]}, {"owner", owner_code(owners[s])}});
    auto word = [&](const std::vector<std::size_t>& w) {
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t x : w) out.push_back(alphabet[x]);
        return out;
    };
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rules)
        rs.push_back({{"from", states[r.from]}, {"top", alphabet[r.top]}, {"to", states[r.to]}, {"push", word(r.push)},
                      {"effect", r.effect}});
    return {{"states", ss},       {"alphabet", alphabet},           {"dimension", dimension},
            {"rules", rs},        {"initial", states[initial]},     {"initial_stack", word(initial_stack)},
            {"initial_energy", initial_energy}};
}

PushdownGame PushdownGame::from_json(const nlohmann::json& j) {
    PushdownGame p;
    try {
        std::unordered_map<std::string, std::size_t> state_ix, letter_ix;
        for (const auto& s : j.at("states")) {
            state_ix[s.at("name").get<std::string>()] = p.states.size();
            p.states.push_back(s.at("name").get<std::string>());
            p.owners.push_back(parse_owner(s.at("owner").get<std::string>()));
        }
        p.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < p.alphabet.size(); ++i) letter_ix[p.alphabet[i]] = i;
        p.dimension = j.value("dimension", std::size_t{0});
        auto lookup = [](const auto& m, const std::string& k, const char* what) {
            auto it = m.find(k);
            if (it == m.end()) throw InputError(std::string("unknown ") + what + " '" + k + "'");
            return it->second;
        };
        auto word = [&](const nlohmann::json& w) {
            std::vector<std::size_t> out;
            for (const auto& x : w) out.push_back(lookup(letter_ix, x.get<std::string>(), "stack letter"));
            return out;
        };
        for (const auto& r : j.at("rules")) {
            PushdownRule rule;
            rule.from = lookup(state_ix, r.at("from").get<std::string>(), "state");
            rule.top = lookup(letter_ix, r.at("top").get<std::string>(), "stack letter");
            rule.to = lookup(state_ix, r.at("to").get<std::string>(), "state");
            rule.push = word(r.at("push"));
            rule.effect = r.value("effect", std::vector<int>(p.dimension, 0));
            p.rules.push_back(std::move(rule));
        }
        p.initial = lookup(state_ix, j.at("initial").get<std::string>(), "state");
        p.initial_stack = word(j.value("initial_stack", nlohmann::json::array()));
        p.initial_energy = j.value("initial_energy", std::vector<std::int64_t>(p.dimension, 0));
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed pushdown game: ") + ex.what());
    }
    p.check();
    return p;
}

GameArena energy_pushdown_to_viability(const PushdownGame& e) {
    e.check();
    PresentationGraph g;
    // Vertex 0 is the bottom letter, then the stack alphabet, then one vertex per dimension.
    const std::string bottom_name = [&] {
        std::string n = "bottom";
        while (std::find(e.alphabet.begin(), e.alphabet.end(), n) != e.alphabet.end()) n += "'";
        return n;
    }();
    const VertexId bottom = g.add_vertex(bottom_name, false);
    std::vector<VertexId> stack;
    for (const auto& x : e.alphabet) stack.push_back(g.add_vertex(x, false));
    std::vector<VertexId> energy;
    for (std::size_t i = 0; i < e.dimension; ++i) energy.push_back(g.add_vertex(unique_vertex_name(g, "e" + std::to_string(i + 1)), false));
    for (std::size_t i = 0; i < energy.size(); ++i) {
        for (std::size_t j = i + 1; j < energy.size(); ++j) g.add_edge(energy[i], energy[j]);
        g.add_edge(energy[i], bottom);
        for (VertexId u : stack) g.add_edge(energy[i], u);
    }
    GameArena out(std::move(g));

    std::vector<StateId> q;
    for (std::size_t s = 0; s < e.states.size(); ++s) q.push_back(out.add_state(e.states[s], e.owners[s]));
    const StateId init = named_state(out, "init", Owner::Exists, "pushes the bottom letter and the initial configuration");
    const StateId smiley = named_state(out, "smiley", Owner::Exists, "universal pop on another top letter");
    out.add_transition(smiley, Word{}, smiley);

    auto energy_word = [&](std::size_t i, std::int64_t amount) {
        Word w;
        for (std::int64_t k = 0; k < (amount < 0 ? -amount : amount); ++k) w.push_back(Letter{energy[i], amount < 0});
        return w;
    };
    Word start{Letter{bottom, false}};
    for (std::size_t x : e.initial_stack) start.push_back(Letter{stack[x], false});
    for (std::size_t i = 0; i < e.dimension; ++i) {
        Word w = energy_word(i, e.initial_energy[i]);
        start.insert(start.end(), w.begin(), w.end());
    }
    out.add_transition(init, start, q[e.initial]);
    out.set_initial(init);

    std::vector<char> has_rule(e.states.size(), 0);
    for (std::size_t ri = 0; ri < e.rules.size(); ++ri) {
        const PushdownRule& r = e.rules[ri];
        has_rule[r.from] = 1;
        Word label{Letter{stack[r.top], true}};
        for (std::size_t x : r.push) label.push_back(Letter{stack[x], false});
        for (std::size_t i = 0; i < e.dimension; ++i)
            if (r.effect[i] != 0) label.push_back(Letter{energy[i], r.effect[i] < 0});
        if (e.owners[r.from] == Owner::Exists) {
            out.connect(q[r.from], std::move(label), q[r.to]);
            continue;
        }
        const StateId chooser = out.fresh_state(e.states[r.from] + ".pop", Owner::Exists,
                                                "rule " + std::to_string(ri) + " on top " + e.alphabet[r.top]);
        out.add_transition(q[r.from], Word{}, chooser);
        out.connect(chooser, std::move(label), q[r.to]);
        out.connect(chooser, Word{Letter{bottom, true}}, smiley);
        for (std::size_t x = 0; x < stack.size(); ++x)
            if (x != r.top) out.connect(chooser, Word{Letter{stack[x], true}}, smiley);
    }
    // Stuck players: a stuck universal player loses, a stuck existential one keeps only invalid moves.
    std::optional<StateId> sadey;
    for (std::size_t s = 0; s < e.states.size(); ++s) {
        if (has_rule[s]) continue;
        if (e.owners[s] == Owner::Forall) {
            out.add_transition(q[s], Word{}, smiley);
            continue;
        }
        if (!sadey) {
            sadey = named_state(out, "sadey", Owner::Exists, "existential player stuck");
            out.add_transition(*sadey, Word{Letter{bottom, true}, Letter{bottom, true}}, *sadey);
        }
        out.add_transition(q[s], Word{}, *sadey);
    }
    return out;
}

GameArena pushdown_game_to_viability(const PushdownGame& p) {
    if (p.dimension != 0) throw DomainError("pushdown game must have dimension 0");
    return energy_pushdown_to_viability(p);
}

PushdownGame viability_to_pushdown_game(const GameArena& a, const Word& credit) {
    const PresentationGraph& g = a.graph();
    if (!g.looped_vertices().empty()) throw DomainError("pushdown translation needs a graph without looped vertices");
    std::vector<VertexId> counters, stack;
    for (VertexId v = 0; v < g.size(); ++v) {
        bool all = true;
        for (VertexId u = 0; u < g.size(); ++u)
            if (u != v && !g.adjacent(u, v)) all = false;
        (all ? counters : stack).push_back(v);
    }
    for (VertexId u : stack)
        for (VertexId v : stack)
            if (u != v && g.adjacent(u, v)) throw DomainError("stack letters of a pushdown translation must be independent");

    PushdownGame p;
    std::vector<std::size_t> stack_ix(g.size(), 0), counter_ix(g.size(), 0);
    for (VertexId u : stack) {
        stack_ix[u] = p.alphabet.size();
        p.alphabet.push_back(g.name(u));
    }
    std::string bottom_name = "bottom";
    while (g.find(bottom_name)) bottom_name += "'";
    const std::size_t bottom = p.alphabet.size();
    p.alphabet.push_back(bottom_name);
    for (std::size_t i = 0; i < counters.size(); ++i) counter_ix[counters[i]] = i;
    p.dimension = counters.size();

    const GameArena n = normalize_letters(a);
    for (StateId s = 0; s < n.state_count(); ++s) {
        p.states.push_back(n.state_name(s));
        p.owners.push_back(n.owner(s));
    }
    auto add_state = [&](const std::string& name, Owner o) {
        p.states.push_back(name);
        p.owners.push_back(o);
        return p.states.size() - 1;
    };
    const std::size_t trap = add_state("trap", Owner::Exists);
    const std::vector<int> zero(p.dimension, 0);
    auto every_top = [&](std::size_t from, std::size_t to, std::size_t push_extra, const std::vector<int>& effect) {
        for (std::size_t t = 0; t < p.alphabet.size(); ++t) {
            std::vector<std::size_t> push{t};
            if (push_extra != SIZE_MAX) push.push_back(push_extra);
            p.rules.push_back({from, t, to, std::move(push), effect});
        }
    };

    std::vector<char> has_out(n.state_count(), 0);
    for (const Transition& t : n.transitions()) {
        has_out[t.from] = 1;
        if (t.label.empty()) {
            every_top(t.from, t.to, SIZE_MAX, zero);
            continue;
        }
        const Letter x = t.label.front();
        if (std::find(counters.begin(), counters.end(), x.vertex) != counters.end()) {
            std::vector<int> effect = zero;
            effect[counter_ix[x.vertex]] = x.inverse ? -1 : 1;
            every_top(t.from, t.to, SIZE_MAX, effect);
        } else if (!x.inverse) {
            every_top(t.from, t.to, stack_ix[x.vertex], zero);
        } else if (n.owner(t.from) == Owner::Exists) {
            p.rules.push_back({t.from, stack_ix[x.vertex], t.to, {}, zero});
        } else {
            const std::size_t chooser = add_state(n.state_name(t.from) + ".pop" + std::to_string(p.states.size()), Owner::Exists);
            every_top(t.from, chooser, SIZE_MAX, zero);
            p.rules.push_back({chooser, stack_ix[x.vertex], t.to, {}, zero});
            every_top(chooser, trap, SIZE_MAX, zero);
        }
    }
    for (StateId s = 0; s < n.state_count(); ++s)
        if (!has_out[s] && n.owner(s) == Owner::Forall) every_top(s, trap, SIZE_MAX, zero);

    const Word c = reduce_word(g, credit);
    if (!is_right_invertible(g, c)) throw DomainError("credit is not right-invertible");
    p.initial = n.initial();
    p.initial_stack.push_back(bottom);
    p.initial_energy.assign(p.dimension, 0);
    for (Letter x : c) {
        if (std::find(counters.begin(), counters.end(), x.vertex) != counters.end())
            ++p.initial_energy[counter_ix[x.vertex]];
        else
            p.initial_stack.push_back(stack_ix[x.vertex]);
    }
    p.check();
    return p;
}

GameArena relabel_iii_to_iv(const GameArena& a, VertexId c) {
    const PresentationGraph& g = a.graph();
    if (g.size() != 3 || c >= 3) throw DomainError("relabeling expects the three-vertex path graph");
    std::optional<VertexId> other;
    VertexId middle = 0;
    for (VertexId b = 0; b < 3; ++b)
        for (VertexId x = 0; x < 3; ++x)
            if (matches_pattern(g, 3, x, b, c)) {
                other = x;
                middle = b;
            }
    if (!other) throw DomainError("relabeling expects a path of loop-free vertices ending in the chosen vertex");
    PresentationGraph ng;
    for (VertexId v = 0; v < 3; ++v) ng.add_vertex(g.name(v), v == c);
    ng.add_edge(*other, middle);
    ng.add_edge(middle, c);
    const Letter lc{c, false}, la{*other, false};
    return relabel_arena(a, std::make_shared<const PresentationGraph>(std::move(ng)), [&](const Word& w) {
        Word out;
        for (Letter x : w) {
            if (x.vertex != c) {
                out.push_back(x);
            } else if (!x.inverse) {
                out.insert(out.end(), {lc, la, lc});
            } else {
                out.insert(out.end(), {lc.bar(), la.bar(), lc.bar()});
            }
        }
        return out;
    });
}

GameArena relabel_iii_to_iv(const GameArena& a) {
    const PresentationGraph& g = a.graph();
    for (VertexId c = static_cast<VertexId>(g.size()); c-- > 0;)
        for (VertexId b = 0; b < g.size(); ++b)
            for (VertexId x = 0; x < g.size(); ++x)
                if (g.size() == 3 && matches_pattern(g, 3, x, b, c)) return relabel_iii_to_iv(a, c);
    throw DomainError("relabeling expects the three-vertex path graph of loop-free vertices");
}

}  // namespace valence
