#include "valence/solver_fv.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

#include <spdlog/spdlog.h>

#include "valence/errors.hpp"

namespace valence {

const char* winner_code(Winner w) { return w == Winner::Exists ? "E" : "A"; }

GameArena prepare_for_saturation(const GameArena& a, const ClassReport& cls, const Word& credit, StackEncoding encoding) {
    if (cls.kind != ClassKind::PdGrpTimesGrp) throw DomainError("saturation needs a PD(Grp) x Grp graph");
    GameArena b = encode_initial_credit(a, credit);
    b = strip_vertices(b, cls.decomposition.central);
    if (encoding == StackEncoding::SingleLetter) b = to_single_stack_letter(b, b.graph().unlooped_vertices());
    b = normalize_letters(b);
    b = pushes_to_universal(b);
    return eliminate_dead_ends(b);
}

namespace {

// Keeps subset-minimal options; among equal sets the earliest survives. Result sorted by set.
template <typename T, typename SetOf>
std::vector<T> minimize(std::vector<T> items, SetOf set_of) {
    if (items.size() <= 1) return items;
    std::vector<std::size_t> count(items.size()), order(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        count[i] = set_of(items[i]).count();
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return count[x] < count[y]; });
    std::vector<std::size_t> kept;
    for (std::size_t i : order) {
        const auto& si = set_of(items[i]);
        bool covered = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return set_of(items[k]).subset_of(si); });
        if (!covered) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end(), [&](std::size_t x, std::size_t y) { return set_of(items[x]) < set_of(items[y]); });
    std::vector<T> out;
    out.reserve(kept.size());
    for (std::size_t k : kept) out.push_back(std::move(items[k]));
    return out;
}

}  // namespace

Saturation::Saturation(const GameArena& prepared, SolverOptions options)
    : arena_(prepared), options_(options), n_(prepared.state_count()), cayley_(prepared.graph(), {}, 0) {
    const PresentationGraph& g = arena_.graph();
    stack_letters_ = g.unlooped_vertices();
    stack_of_vertex_.assign(g.size(), -1);
    for (std::size_t i = 0; i < stack_letters_.size(); ++i) stack_of_vertex_[stack_letters_[i]] = static_cast<int>(i);
    for (VertexId u : stack_letters_)
        for (VertexId v = 0; v < g.size(); ++v)
            if (g.adjacent(u, v)) throw DomainError("stack letter '" + g.name(u) + "' commutes with '" + g.name(v) + "'");

    moves_.assign(n_, {});
    const auto& ts = arena_.transitions();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& t = ts[i];
        if (t.label.size() > 1) throw DomainError("saturation expects single-letter labels");
        Move m;
        m.to = t.to;
        m.transition = static_cast<std::uint32_t>(i);
        if (t.label.empty()) {
            m.kind = Kind::Epsilon;
        } else {
            m.letter = t.label[0];
            if (g.looped(m.letter.vertex)) {
                m.kind = Kind::Group;
            } else {
                m.kind = m.letter.inverse ? Kind::Pop : Kind::Push;
                m.stack = static_cast<std::size_t>(stack_of_vertex_[m.letter.vertex]);
            }
        }
        moves_[t.from].push_back(m);
    }
    for (StateId q = 0; q < n_; ++q)
        if (moves_[q].empty()) throw DomainError("saturation expects an arena without dead ends");

    compute_thresholds();
    std::size_t radius = threshold_.empty() ? 0 : *std::max_element(threshold_.begin(), threshold_.end());
    cayley_ = RestrictedCayley(arena_.graph(), g.looped_vertices(), radius);
    index_.assign((stack_letters_.size() + 1) * n_, {});
    pairs_at_state_.assign(n_, {});
    table_.assign(stack_letters_.size() * n_, {});
    log_.push_back(Derivation{});
}

std::size_t Saturation::stack_index(VertexId v) const {
    if (v >= stack_of_vertex_.size() || stack_of_vertex_[v] < 0) throw DomainError("not a stack letter");
    return static_cast<std::size_t>(stack_of_vertex_[v]);
}

void Saturation::compute_thresholds() {
    // Pop targets reachable from each state.
    std::vector<std::vector<StateId>> succ(n_);
    for (StateId q = 0; q < n_; ++q)
        for (const auto& m : moves_[q]) succ[q].push_back(m.to);
    auto reach = [&](StateId from, const std::vector<std::vector<StateId>>& adj) {
        std::vector<char> seen(n_, 0);
        std::deque<StateId> queue{from};
        seen[from] = 1;
        while (!queue.empty()) {
            StateId s = queue.front();
            queue.pop_front();
            for (StateId t : adj[s])
                if (!seen[t]) {
                    seen[t] = 1;
                    queue.push_back(t);
                }
        }
        return seen;
    };
    std::vector<std::vector<StateId>> pop_targets(n_);
    for (StateId r = 0; r < n_; ++r) {
        auto seen = reach(r, succ);
        std::vector<char> tgt(n_, 0);
        for (StateId s = 0; s < n_; ++s)
            if (seen[s])
                for (const auto& m : moves_[s])
                    if (m.kind == Kind::Pop) tgt[m.to] = 1;
        for (StateId s = 0; s < n_; ++s)
            if (tgt[s]) pop_targets[r].push_back(s);
    }
    // Height-0 graph: pops end a branch, pushes jump to the states their pops can return to.
    std::vector<std::vector<StateId>> level(n_);
    std::vector<char> has_group(n_, 0);
    for (StateId q = 0; q < n_; ++q)
        for (const auto& m : moves_[q]) {
            switch (m.kind) {
                case Kind::Epsilon: level[q].push_back(m.to); break;
                case Kind::Group:
                    level[q].push_back(m.to);
                    has_group[q] = 1;
                    break;
                case Kind::Push:
                    for (StateId t : pop_targets[m.to]) level[q].push_back(t);
                    break;
                case Kind::Pop: break;
            }
        }
    threshold_.assign(n_, 0);
    for (StateId q = 0; q < n_; ++q) {
        auto seen = reach(q, level);
        std::size_t k = 0;
        for (StateId s = 0; s < n_; ++s)
            if (seen[s] && has_group[s]) ++k;
        threshold_[q] = k;
    }
}

Saturation::Node Saturation::clamp(StateId q, Node c) const {
    if (c == RestrictedCayley::kTrap) return c;
    return cayley_.length(c) > threshold_[q] ? RestrictedCayley::kTrap : c;
}

std::optional<Saturation::PairId> Saturation::find_pair(std::uint32_t root, StateId q, Node c) const {
    const auto& m = index_[root * n_ + q];
    auto it = m.find(clamp(q, c));
    if (it == m.end()) return std::nullopt;
    return it->second;
}

Saturation::PairId Saturation::pair_for(std::uint32_t root, StateId q, Node c) {
    c = clamp(q, c);
    auto& m = index_[root * n_ + q];
    if (auto it = m.find(c); it != m.end()) return it->second;
    auto id = static_cast<PairId>(pairs_.size());
    Pair p;
    p.root = root;
    p.state = q;
    p.node = c;
    pairs_.push_back(std::move(p));
    m.emplace(c, id);
    pairs_at_state_[q].push_back(id);
    enqueue(id);
    return id;
}

void Saturation::depend(PairId child, PairId parent) {
    if (dep_seen_.insert((std::uint64_t{child} << 32) | parent).second) pairs_[child].dependents.push_back(parent);
}

void Saturation::enqueue(PairId p) {
    if (pairs_[p].queued) return;
    pairs_[p].queued = true;
    worklist_.push_back(p);
}

std::vector<Saturation::Option> Saturation::contribution(PairId self, const Move& m) {
    const std::uint32_t root = pairs_[self].root;
    const Node c = pairs_[self].node;
    const bool log = options_.want_certificate;
    std::vector<Option> out;
    auto part = [&](std::uint32_t table_stamp, std::vector<std::uint32_t> children) {
        return log ? std::vector<Part>{Part{m.transition, table_stamp, std::move(children)}} : std::vector<Part>{};
    };
    auto from_child = [&](PairId child) {
        depend(child, self);
        for (const auto& e : pairs_[child].family) out.push_back(Option{e.set, part(0, {e.stamp})});
    };
    switch (m.kind) {
        case Kind::Epsilon: from_child(pair_for(root, m.to, c)); break;
        case Kind::Group: {
            Node next = c == RestrictedCayley::kTrap ? c : cayley_.step(c, m.letter);
            from_child(pair_for(root, m.to, next));
            break;
        }
        case Kind::Pop: {
            StateSet s(n_);
            if (c == cayley_.identity() && root == m.stack) s.insert(m.to);
            out.push_back(Option{std::move(s), part(0, {})});
            break;
        }
        case Kind::Push: {
            pair_for(static_cast<std::uint32_t>(m.stack), m.to, cayley_.identity());
            for (const auto& r : table_[m.stack * n_ + m.to]) {
                if (r.set.empty()) {
                    out.push_back(Option{StateSet(n_), part(r.stamp, {})});
                    continue;
                }
                // One leaf set per state the pushed subtree returns to.
                std::vector<std::pair<StateSet, std::vector<std::uint32_t>>> acc{{StateSet(n_), {}}};
                for (std::size_t back : r.set.members()) {
                    PairId child = pair_for(root, static_cast<StateId>(back), c);
                    depend(child, self);
                    std::vector<std::pair<StateSet, std::vector<std::uint32_t>>> next;
                    for (const auto& a : acc)
                        for (const auto& e : pairs_[child].family) {
                            StateSet u = a.first;
                            u |= e.set;
                            auto stamps = a.second;
                            if (log) stamps.push_back(e.stamp);
                            next.emplace_back(std::move(u), std::move(stamps));
                        }
                    acc = minimize(std::move(next), [](const auto& x) -> const StateSet& { return x.first; });
                    if (acc.size() > options_.max_antichain) throw ResourceError("antichain width limit exceeded");
                    if (acc.empty()) break;
                }
                for (auto& a : acc) out.push_back(Option{std::move(a.first), part(r.stamp, std::move(a.second))});
            }
            break;
        }
    }
    return out;
}

void Saturation::evaluate(PairId p) {
    ++evaluations_;
    const StateId q = pairs_[p].state;
    std::vector<Option> result;
    if (arena_.owner(q) == Owner::Forall) {
        for (const auto& m : moves_[q]) {
            auto c = contribution(p, m);
            std::move(c.begin(), c.end(), std::back_inserter(result));
        }
    } else {
        result.push_back(Option{StateSet(n_), {}});
        for (const auto& m : moves_[q]) {
            auto c = contribution(p, m);
            std::vector<Option> next;
            for (const auto& a : result)
                for (const auto& o : c) {
                    Option u{a.set, {}};
                    u.set |= o.set;
                    if (options_.want_certificate) {
                        u.parts = a.parts;
                        u.parts.insert(u.parts.end(), o.parts.begin(), o.parts.end());
                    }
                    next.push_back(std::move(u));
                }
            result = minimize(std::move(next), [](const Option& o) -> const StateSet& { return o.set; });
            if (result.size() > options_.max_antichain) throw ResourceError("antichain width limit exceeded");
            if (result.empty()) break;
        }
    }
    result = minimize(std::move(result), [](const Option& o) -> const StateSet& { return o.set; });
    if (result.size() > options_.max_antichain) throw ResourceError("antichain width limit exceeded");

    auto& old = pairs_[p].family;
    bool changed = result.size() != old.size();
    for (std::size_t i = 0; !changed && i < result.size(); ++i) changed = !(result[i].set == old[i].set);
    if (!changed) return;

    std::vector<StateSet> old_sets, new_sets;
    for (const auto& e : old) old_sets.push_back(e.set);
    std::vector<Entry> fresh;
    for (auto& o : result) {
        new_sets.push_back(o.set);
        auto same = std::find_if(old.begin(), old.end(), [&](const Entry& e) { return e.set == o.set; });
        if (same != old.end()) {
            fresh.push_back(*same);
            continue;
        }
        std::uint32_t stamp = ++clock_;
        if (options_.want_certificate) log_.push_back(Derivation{p, o.set, std::move(o.parts)});
        fresh.push_back(Entry{std::move(o.set), stamp});
    }
    if (!dominates(new_sets, old_sets)) monotone_ = false;
    pairs_[p].family = std::move(fresh);
    for (PairId d : pairs_[p].dependents) enqueue(d);
}

void Saturation::drain() {
    while (worklist_head_ < worklist_.size()) {
        PairId p = worklist_[worklist_head_++];
        pairs_[p].queued = false;
        evaluate(p);
        if (worklist_head_ > 4096 && worklist_head_ * 2 > worklist_.size()) {
            worklist_.erase(worklist_.begin(), worklist_.begin() + static_cast<std::ptrdiff_t>(worklist_head_));
            worklist_head_ = 0;
        }
    }
}

std::vector<StateSet> Saturation::sets_of(PairId p) const {
    std::vector<StateSet> out;
    for (const auto& e : pairs_[p].family) out.push_back(e.set);
    return out;
}

void Saturation::run() {
    if (done_) return;
    const std::size_t m = stack_letters_.size();
    pair_for(static_cast<std::uint32_t>(bottom()), arena_.initial(), cayley_.identity());
    if (options_.all_roots)
        for (std::uint32_t j = 0; j <= m; ++j)
            for (StateId q = 0; q < n_; ++q) pair_for(j, q, cayley_.identity());

    std::vector<std::vector<StateId>> push_sources(m * n_);
    for (StateId p = 0; p < n_; ++p)
        for (const auto& mv : moves_[p])
            if (mv.kind == Kind::Push) push_sources[mv.stack * n_ + mv.to].push_back(p);

    const std::size_t bound = n_ >= 58 ? std::numeric_limits<std::size_t>::max() : n_ * (std::size_t{1} << n_);
    std::vector<std::vector<StateSet>> previous((m + 1) * n_);
    for (std::size_t round = 0;; ++round) {
        drain();
        std::vector<std::vector<StateSet>> current((m + 1) * n_);
        for (std::uint32_t j = 0; j <= m; ++j)
            for (StateId q = 0; q < n_; ++q)
                if (auto p = find_pair(j, q, cayley_.identity())) current[j * n_ + q] = sets_of(*p);
        if (options_.record_history) history_.push_back(current);
        for (std::size_t k = 0; k < current.size(); ++k)
            if (!dominates(current[k], previous[k])) monotone_ = false;
        spdlog::debug("saturation round {}: {} pairs, {} Cayley nodes", round, pairs_.size(), cayley_.node_count());
        if (current == previous) {
            rounds_ = round;
            break;
        }
        if (round + 1 > bound) throw std::logic_error("saturation exceeded its round bound");
        for (std::uint32_t j = 0; j < m; ++j)
            for (StateId r = 0; r < n_; ++r) {
                const std::size_t k = j * n_ + r;
                if (current[k] == previous[k]) continue;
                auto p = find_pair(j, r, cayley_.identity());
                table_[k] = p ? pairs_[*p].family : std::vector<Entry>{};
                for (StateId src : push_sources[k])
                    for (PairId pp : pairs_at_state_[src]) enqueue(pp);
            }
        previous = std::move(current);
    }
    done_ = true;
}

std::vector<StateSet> Saturation::family(std::size_t root, StateId q) const {
    auto p = find_pair(static_cast<std::uint32_t>(root), q, cayley_.identity());
    return p ? sets_of(*p) : std::vector<StateSet>{};
}

bool Saturation::forall_wins_from_empty(StateId q) const { return !family(bottom(), q).empty(); }

struct Saturation::Frame {
    std::vector<std::pair<StateId, std::uint32_t>> back;
    const Frame* outer = nullptr;
};

nlohmann::json Saturation::certificate(StateId q) const {
    if (!options_.want_certificate) throw DomainError("certificate requested without derivation logging");
    auto p = find_pair(static_cast<std::uint32_t>(bottom()), q, cayley_.identity());
    if (!p || pairs_[*p].family.empty()) throw DomainError("no universal strategy tree from this state");
    std::size_t budget = options_.max_certificate_nodes;

    const PresentationGraph& g = arena_.graph();
    std::function<nlohmann::json(std::uint32_t, const Word&, const Frame*)> go = [&](std::uint32_t stamp, const Word& x,
                                                                                  const Frame* frame) -> nlohmann::json {
        if (budget-- == 0) throw ResourceError("certificate exceeds the node budget");
        const Derivation& d = log_.at(stamp);
        const StateId s = pairs_[d.pair].state;
        nlohmann::json node = {{"state", arena_.state_name(s)}, {"owner", owner_code(arena_.owner(s))}, {"storage", g.format_word(x)}};
        nlohmann::json children = nlohmann::json::array();
        for (const auto& part : d.parts) {
            const Transition& t = arena_.transitions().at(part.transition);
            Word y = multiply(g, x, t.label);
            nlohmann::json edge = {{"label", g.format_word(t.label)}};
            if (!is_right_invertible(g, y)) {
                if (budget-- == 0) throw ResourceError("certificate exceeds the node budget");
                edge["node"] = {{"state", arena_.state_name(t.to)}, {"owner", owner_code(arena_.owner(t.to))},
                                {"storage", g.format_word(y)}, {"invalid", true}};
                children.push_back(std::move(edge));
                continue;
            }
            const bool push = t.label.size() == 1 && !g.looped(t.label[0].vertex) && !t.label[0].inverse;
            const bool pop = t.label.size() == 1 && !g.looped(t.label[0].vertex) && t.label[0].inverse;
            if (push) {
                const Derivation& sub = log_.at(part.table_stamp);
                Frame inner;
                inner.outer = frame;
                auto members = sub.set.members();
                for (std::size_t k = 0; k < members.size(); ++k)
                    inner.back.emplace_back(static_cast<StateId>(members[k]), part.children.at(k));
                edge["node"] = go(part.table_stamp, y, &inner);
            } else if (pop) {
                if (!frame) throw std::logic_error("valid pop below the initial stack");
                auto it = std::find_if(frame->back.begin(), frame->back.end(), [&](const auto& b) { return b.first == t.to; });
                if (it == frame->back.end()) throw std::logic_error("pop returns to a state outside the leaf set");
                edge["node"] = go(it->second, y, frame->outer);
            } else {
                edge["node"] = go(part.children.at(0), y, frame);
            }
            children.push_back(std::move(edge));
        }
        node["moves"] = std::move(children);
        return node;
    };
    // The root family entry for the empty set.
    return go(pairs_[*p].family.front().stamp, Word{}, nullptr);
}

FvVerdict solve_fv(const GameArena& a, const Word& credit, const SolverOptions& options) {
    ClassReport cls = classify(a.graph());
    if (cls.kind == ClassKind::Undecidable) {
        const auto& w = *cls.witness;
        throw UndecidableClassError("graph contains illegal pattern " + std::to_string(w.kind) + " on vertices " +
                                    a.graph().name(w.a) + ", " + a.graph().name(w.b) + ", " + a.graph().name(w.c) +
                                    "; only the bounded oracle applies");
    }
    if (cls.kind == ClassKind::VassTimesGrp)
        throw UndecidableClassError("VASS x Grp graphs have no exact solver here; only the bounded oracle applies");
    FvVerdict v;
    if (cls.kind == ClassKind::Grp) {
        // Every element is right-invertible; only dead ends can be forced.
        v.winner = dead_end_attractor(a)[a.initial()] ? Winner::Forall : Winner::Exists;
        return v;
    }
    GameArena prepared = prepare_for_saturation(a, cls, credit, options.stack_encoding);
    Saturation s(prepared, options);
    s.run();
    v.winner = s.forall_wins_from_empty(prepared.initial()) ? Winner::Forall : Winner::Exists;
    v.rounds = s.rounds();
    v.cayley_nodes = s.cayley_nodes();
    if (options.want_certificate && v.winner == Winner::Forall) v.certificate = s.certificate(prepared.initial());
    return v;
}

}  // namespace valence
