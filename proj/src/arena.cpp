#include "valence/arena.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "valence/errors.hpp"

namespace valence {

const char* owner_code(Owner o) { return o == Owner::Exists ? "E" : "A"; }

Owner parse_owner(std::string_view code) {
    if (code == "E" || code == "exists" || code == "∃") return Owner::Exists;
    if (code == "A" || code == "forall" || code == "∀") return Owner::Forall;
    throw InputError("unknown owner '" + std::string(code) + "'");
}

GameArena::GameArena(PresentationGraph g) : graph_(std::make_shared<const PresentationGraph>(std::move(g))) {}

GameArena::GameArena(std::shared_ptr<const PresentationGraph> g) : graph_(std::move(g)) {
    if (!graph_) throw InputError("arena needs a graph");
}

StateId GameArena::add_state(std::string name, Owner owner, std::string note) {
    if (name.empty()) throw InputError("empty state name");
    if (index_.count(name)) throw InputError("duplicate state name '" + name + "'");
    auto id = static_cast<StateId>(names_.size());
    index_.emplace(name, id);
    names_.push_back(std::move(name));
    owners_.push_back(owner);
    notes_.push_back(std::move(note));
    if (!has_initial_) {
        initial_ = id;
        has_initial_ = true;
    }
    return id;
}

StateId GameArena::fresh_state(std::string_view base, Owner owner, std::string note) {
    for (std::size_t k = 0;; ++k) {
        std::string name = std::string(base) + "#" + std::to_string(k);
        if (!index_.count(name)) return add_state(std::move(name), owner, std::move(note));
    }
}

void GameArena::add_transition(StateId from, Word label, StateId to) {
    if (from >= state_count() || to >= state_count()) throw InputError("transition endpoint out of range");
    for (Letter x : label)
        if (x.vertex >= graph_->size()) throw InputError("transition label refers to unknown vertex");
    if (!pairs_.insert(pair_key(from, to)).second)
        throw InputError("second transition from '" + names_[from] + "' to '" + names_[to] + "'");
    transitions_.push_back({from, std::move(label), to});
}

void GameArena::connect(StateId from, Word label, StateId to) {
    if (!has_transition(from, to)) {
        add_transition(from, std::move(label), to);
        return;
    }
    StateId mid = fresh_state(names_.at(from), owners_.at(from));
    add_transition(from, std::move(label), mid);
    add_transition(mid, Word{}, to);
}

bool GameArena::has_transition(StateId from, StateId to) const { return pairs_.count(pair_key(from, to)) != 0; }

std::optional<StateId> GameArena::find_state(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId GameArena::state_index(std::string_view name) const {
    if (auto s = find_state(name)) return *s;
    throw InputError("unknown state '" + std::string(name) + "'");
}

void GameArena::set_initial(StateId s) {
    if (s >= state_count()) throw InputError("initial state out of range");
    initial_ = s;
    has_initial_ = true;
}

std::vector<std::vector<std::size_t>> GameArena::out_edges() const {
    std::vector<std::vector<std::size_t>> out(state_count());
    for (std::size_t i = 0; i < transitions_.size(); ++i) out[transitions_[i].from].push_back(i);
    return out;
}

nlohmann::json GameArena::to_json() const {
    nlohmann::json states = nlohmann::json::array();
    for (StateId s = 0; s < state_count(); ++s) {
        nlohmann::json st = {{"name", names_[s]}, {"owner", owner_code(owners_[s])}};
        if (!notes_[s].empty()) st["note"] = notes_[s];
        states.push_back(std::move(st));
    }
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : transitions_) {
        nlohmann::json label = nlohmann::json::array();
        for (Letter x : t.label) label.push_back(graph_->format_letter(x));
        ts.push_back({{"from", names_[t.from]}, {"label", label}, {"to", names_[t.to]}});
    }
    nlohmann::json j = {{"graph", graph_->to_json()}, {"states", states}, {"transitions", ts}};
    if (has_initial_) j["initial"] = names_[initial_];
    return j;
}

GameArena GameArena::from_json(const nlohmann::json& j) {
    try {
        GameArena a(PresentationGraph::from_json(j.at("graph")));
        for (const auto& s : j.at("states"))
            a.add_state(s.at("name").get<std::string>(), parse_owner(s.at("owner").get<std::string>()),
                        s.value("note", std::string{}));
        for (const auto& t : j.at("transitions")) {
            Word label;
            const auto& l = t.at("label");
            if (l.is_string()) {
                label = a.graph().parse_word(l.get<std::string>());
            } else {
                for (const auto& tok : l) label.push_back(a.graph().parse_letter(tok.get<std::string>()));
            }
            a.add_transition(a.state_index(t.at("from").get<std::string>()), std::move(label),
                             a.state_index(t.at("to").get<std::string>()));
        }
        if (a.state_count() == 0) throw InputError("arena has no states");
        a.set_initial(a.state_index(j.at("initial").get<std::string>()));
        return a;
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed arena: ") + ex.what());
    }
}

std::string GameArena::to_dot() const {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    };
    std::ostringstream os;
    os << "digraph arena {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (StateId s = 0; s < state_count(); ++s)
        os << "  " << quote(names_[s]) << " [shape=" << (owners_[s] == Owner::Exists ? "circle" : "box") << "];\n";
    os << "  __start -> " << quote(names_[initial_]) << ";\n";
    for (const auto& t : transitions_) {
        std::string label = t.label.empty() ? "ε" : graph_->format_word(t.label);
        os << "  " << quote(names_[t.from]) << " -> " << quote(names_[t.to]) << " [label=" << quote(label) << "];\n";
    }
    os << "}\n";
    return os.str();
}

Diagnostics validate(const GameArena& a) {
    Diagnostics d;
    if (a.state_count() == 0) {
        d.errors.push_back("arena has no states");
        return d;
    }
    std::vector<char> has_out(a.state_count(), 0);
    for (const auto& t : a.transitions()) {
        has_out[t.from] = 1;
        for (Letter x : t.label)
            if (x.vertex >= a.graph().size()) d.errors.push_back("label of transition from '" + a.state_name(t.from) + "' uses an unknown vertex");
    }
    for (StateId s = 0; s < a.state_count(); ++s)
        if (!has_out[s]) d.dead_ends.push_back(s);
    return d;
}

GameArena relabel_arena(const GameArena& a, std::shared_ptr<const PresentationGraph> g,
                        const std::function<Word(const Word&)>& relabel) {
    GameArena out(std::move(g));
    for (StateId s = 0; s < a.state_count(); ++s) out.add_state(a.state_name(s), a.owner(s), a.note(s));
    for (const auto& t : a.transitions()) out.add_transition(t.from, relabel(t.label), t.to);
    out.set_initial(a.initial());
    return out;
}

GameArena normalize_letters(const GameArena& a) {
    GameArena out(a.graph_ptr());
    for (StateId s = 0; s < a.state_count(); ++s) out.add_state(a.state_name(s), a.owner(s), a.note(s));
    out.set_initial(a.initial());
    for (const auto& t : a.transitions()) {
        if (t.label.size() <= 1) {
            out.add_transition(t.from, t.label, t.to);
            continue;
        }
        StateId cur = t.from;
        for (std::size_t i = 0; i + 1 < t.label.size(); ++i) {
            StateId next = out.fresh_state(a.state_name(t.from), a.owner(t.from));
            out.add_transition(cur, Word{t.label[i]}, next);
            cur = next;
        }
        out.add_transition(cur, Word{t.label.back()}, t.to);
    }
    return out;
}

GameArena encode_initial_credit(const GameArena& a, const Word& credit) {
    if (credit.empty()) return a;
    GameArena out = relabel_arena(a, a.graph_ptr(), [](const Word& w) { return w; });
    StateId start = out.fresh_state("init", Owner::Exists, "applies the initial credit");
    out.add_transition(start, credit, a.initial());
    out.set_initial(start);
    return out;
}

bool is_push_label(const PresentationGraph& g, const Word& label) {
    return label.size() == 1 && !label[0].inverse && !g.looped(label[0].vertex);
}

bool is_pop_label(const PresentationGraph& g, const Word& label) {
    return label.size() == 1 && label[0].inverse && !g.looped(label[0].vertex);
}

GameArena pushes_to_universal(const GameArena& a) {
    GameArena out(a.graph_ptr());
    for (StateId s = 0; s < a.state_count(); ++s) out.add_state(a.state_name(s), a.owner(s), a.note(s));
    out.set_initial(a.initial());
    for (const auto& t : a.transitions()) {
        if (a.owner(t.from) == Owner::Exists && is_push_label(a.graph(), t.label)) {
            StateId mid = out.fresh_state(a.state_name(t.from), Owner::Forall);
            out.add_transition(t.from, Word{}, mid);
            out.add_transition(mid, t.label, t.to);
        } else {
            out.add_transition(t.from, t.label, t.to);
        }
    }
    return out;
}

std::vector<char> dead_end_attractor(const GameArena& a) {
    const std::size_t n = a.state_count();
    std::vector<std::vector<StateId>> preds(n);
    std::vector<std::size_t> outdeg(n, 0);
    for (const auto& t : a.transitions()) {
        preds[t.to].push_back(t.from);
        ++outdeg[t.from];
    }
    std::vector<char> in(n, 0);
    std::vector<std::size_t> remaining = outdeg;
    std::deque<StateId> queue;
    for (StateId s = 0; s < n; ++s)
        if (outdeg[s] == 0) {
            in[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        for (StateId p : preds[s]) {
            if (in[p]) continue;
            if (a.owner(p) == Owner::Forall || --remaining[p] == 0) {
                in[p] = 1;
                queue.push_back(p);
            }
        }
    }
    return in;
}

GameArena eliminate_dead_ends(const GameArena& a) {
    Diagnostics d = validate(a);
    if (d.dead_ends.empty()) return a;
    auto unlooped = a.graph().unlooped_vertices();
    if (!unlooped.empty()) {
        GameArena out = relabel_arena(a, a.graph_ptr(), [](const Word& w) { return w; });
        for (StateId s : d.dead_ends) out.add_transition(s, Word{Letter{unlooped.front(), true}}, s);
        return out;
    }
    std::vector<char> attr = dead_end_attractor(a);
    if (attr[a.initial()]) {
        PresentationGraph g = a.graph();
        std::string name = "z";
        while (g.find(name)) name += "#";
        VertexId z = g.add_vertex(name, false);
        GameArena out(std::move(g));
        StateId sink = out.add_state("sink", Owner::Forall, "universal player forces a dead end");
        out.add_transition(sink, Word{Letter{z, true}}, sink);
        out.set_initial(sink);
        return out;
    }
    GameArena out(a.graph_ptr());
    std::vector<StateId> renum(a.state_count(), 0);
    for (StateId s = 0; s < a.state_count(); ++s)
        if (!attr[s]) renum[s] = out.add_state(a.state_name(s), a.owner(s), a.note(s));
    for (const auto& t : a.transitions())
        if (!attr[t.from] && !attr[t.to]) out.add_transition(renum[t.from], t.label, renum[t.to]);
    out.set_initial(renum[a.initial()]);
    return out;
}

GameArena strip_vertices(const GameArena& a, const std::vector<VertexId>& vertices) {
    const PresentationGraph& g = a.graph();
    std::vector<char> drop(g.size(), 0);
    for (VertexId v : vertices) drop.at(v) = 1;
    PresentationGraph ng;
    std::vector<VertexId> renum(g.size(), 0);
    for (VertexId v = 0; v < g.size(); ++v)
        if (!drop[v]) renum[v] = ng.add_vertex(g.name(v), g.looped(v));
    for (auto [u, v] : g.edges())
        if (!drop[u] && !drop[v]) ng.add_edge(renum[u], renum[v]);
    return relabel_arena(a, std::make_shared<const PresentationGraph>(std::move(ng)), [&](const Word& w) {
        Word out;
        for (Letter x : w)
            if (!drop[x.vertex]) out.push_back({renum[x.vertex], x.inverse});
        return out;
    });
}

GameArena to_single_stack_letter(const GameArena& a, const std::vector<VertexId>& pushdown) {
    const PresentationGraph& g = a.graph();
    if (pushdown.size() <= 1) return a;
    std::vector<int> rank(g.size(), 0);
    for (std::size_t i = 0; i < pushdown.size(); ++i) {
        VertexId u = pushdown[i];
        if (g.looped(u)) throw DomainError("pushdown letter '" + g.name(u) + "' is looped");
        rank.at(u) = static_cast<int>(i) + 1;
    }
    PresentationGraph ng;
    std::vector<VertexId> renum(g.size(), 0);
    for (VertexId v = 0; v < g.size(); ++v)
        if (rank[v] <= 1) renum[v] = ng.add_vertex(g.name(v), g.looped(v));
    for (auto [u, v] : g.edges())
        if (rank[u] <= 1 && rank[v] <= 1) ng.add_edge(renum[u], renum[v]);
    const VertexId gamma = renum[pushdown.front()];
    std::optional<VertexId> sep;
    for (VertexId v = 0; v < g.size() && !sep; ++v) {
        if (!g.looped(v)) continue;
        bool free_of_stack = std::none_of(pushdown.begin(), pushdown.end(), [&](VertexId u) { return g.adjacent(u, v); });
        if (free_of_stack) sep = renum[v];
    }
    if (!sep) {
        std::string name = "g";
        while (ng.find(name)) name += "#";
        sep = ng.add_vertex(name, true);
    }
    const VertexId sv = *sep;
    return relabel_arena(a, std::make_shared<const PresentationGraph>(std::move(ng)), [&](const Word& w) {
        Word out;
        for (Letter x : w) {
            int i = rank[x.vertex];
            if (i == 0) {
                out.push_back({renum[x.vertex], x.inverse});
                continue;
            }
            // u_i -> gamma^i s gamma^i, and its bar -> gamma-^i s- gamma-^i.
            for (int k = 0; k < i; ++k) out.push_back({gamma, x.inverse});
            out.push_back({sv, x.inverse});
            for (int k = 0; k < i; ++k) out.push_back({gamma, x.inverse});
        }
        return out;
    });
}

}  // namespace valence
