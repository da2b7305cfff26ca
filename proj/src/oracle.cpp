#include "valence/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <unordered_map>

#include "valence/classify.hpp"

namespace valence {

std::string OracleVerdict::describe() const {
    switch (kind) {
        case Kind::ForallWins: return "forall-wins(depth " + std::to_string(depth) + ")";
        case Kind::ExistsWins: return "exists-wins";
        case Kind::Unknown:
            return "unknown(" + std::to_string(explored) + " configs, depth " + std::to_string(depth_bound) +
                   (survival ? ", survives " + std::to_string(survival) + " steps" : std::string()) + ")";
    }
    return "?";
}

namespace {

struct ConfigKey {
    StateId state;
    Word storage;
    friend bool operator==(const ConfigKey&, const ConfigKey&) = default;
};

struct ConfigHash {
    std::size_t operator()(const ConfigKey& k) const noexcept { return WordHash{}(k.storage) * 31 + k.state; }
};

class Explorer {
public:
    Explorer(const GameArena& a, const OracleBudget& budget, Objective objective)
        : a_(a), g_(a.graph()), budget_(budget), objective_(objective), out_(a.out_edges()) {}

    OracleVerdict solve(StateId initial, const Word& storage) {
        OracleVerdict v;
        v.depth_bound = budget_.max_depth;
        Word w0 = reduce_word(g_, storage);
        if (!is_right_invertible(g_, w0)) {
            v.kind = OracleVerdict::Kind::ForallWins;
            v.explored = 1;
            return v;
        }
        node(initial, std::move(w0), 0);
        std::size_t checkpoint = 256;
        while (head_ < nodes_.size()) {
            std::uint32_t id = static_cast<std::uint32_t>(head_++);
            if (nodes_[id].target) continue;
            const Node& n = nodes_[id];
            if (n.depth >= budget_.max_depth) {
                frontier_ = true;
                continue;
            }
            if (n.storage.size() > budget_.max_storage || nodes_.size() + out_[n.state].size() > budget_.max_configs) {
                frontier_ = true;
                cut_ = true;
                continue;
            }
            expand(id);
            if (nodes_.size() >= checkpoint) {
                checkpoint *= 2;
                if (auto rank = attractor_rank()) return forall(*rank);
            }
        }
        if (auto rank = attractor_rank()) return forall(*rank);
        v.explored = nodes_.size();
        v.kind = frontier_ ? OracleVerdict::Kind::Unknown : OracleVerdict::Kind::ExistsWins;
        // Every configuration closer than max_depth was expanded, so no forced loss is that short.
        if (frontier_ && !cut_) v.survival = budget_.max_depth;
        return v;
    }

private:
    struct Node {
        StateId state;
        Word storage;
        std::uint32_t depth;
        bool expanded = false;
        bool target = false;
        std::vector<std::uint32_t> succ;
    };

    OracleVerdict forall(std::size_t rank) const {
        OracleVerdict v;
        v.kind = OracleVerdict::Kind::ForallWins;
        v.depth = rank;
        v.explored = nodes_.size();
        v.depth_bound = budget_.max_depth;
        return v;
    }

    std::uint32_t node(StateId s, Word w, std::uint32_t depth) {
        ConfigKey key{s, std::move(w)};
        if (auto it = index_.find(key); it != index_.end()) return it->second;
        auto id = static_cast<std::uint32_t>(nodes_.size());
        Node n{s, key.storage, depth, false, false, {}};
        if (objective_ == Objective::Rio) n.target = !is_right_invertible(g_, n.storage) || out_[s].empty();
        nodes_.push_back(std::move(n));
        index_.emplace(std::move(key), id);
        return id;
    }

    void expand(std::uint32_t id) {
        const StateId s = nodes_[id].state;
        const std::uint32_t depth = nodes_[id].depth;
        std::vector<std::uint32_t> succ;
        for (std::size_t t : out_[s]) {
            const Transition& tr = a_.transitions()[t];
            Word w = multiply(g_, nodes_[id].storage, tr.label);
            if (objective_ == Objective::NonTermination && !is_right_invertible(g_, w)) continue;
            succ.push_back(node(tr.to, std::move(w), depth + 1));
        }
        nodes_[id].expanded = true;
        if (objective_ == Objective::NonTermination && succ.empty()) nodes_[id].target = true;
        nodes_[id].succ = std::move(succ);
    }

    // Attractor rank of node 0, if it lies in the universal attractor of the explored graph.
    std::optional<std::size_t> attractor_rank() const {
        const std::size_t n = nodes_.size();
        std::vector<std::vector<std::uint32_t>> preds(n);
        std::vector<std::uint32_t> pending(n, 0);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!nodes_[v].expanded || nodes_[v].target) continue;
            pending[v] = static_cast<std::uint32_t>(nodes_[v].succ.size());
            for (std::uint32_t w : nodes_[v].succ) preds[w].push_back(v);
        }
        std::vector<std::int64_t> rank(n, -1);
        std::deque<std::uint32_t> queue;
        for (std::uint32_t v = 0; v < n; ++v)
            if (nodes_[v].target) {
                rank[v] = 0;
                queue.push_back(v);
            }
        while (!queue.empty()) {
            std::uint32_t w = queue.front();
            queue.pop_front();
            for (std::uint32_t p : preds[w]) {
                if (rank[p] >= 0) continue;
                if (a_.owner(nodes_[p].state) == Owner::Forall || --pending[p] == 0) {
                    rank[p] = rank[w] + 1;
                    queue.push_back(p);
                }
            }
        }
        if (rank[0] < 0) return std::nullopt;
        return static_cast<std::size_t>(rank[0]);
    }

    const GameArena& a_;
    const PresentationGraph& g_;
    OracleBudget budget_;
    Objective objective_;
    std::vector<std::vector<std::size_t>> out_;
    std::vector<Node> nodes_;
    std::unordered_map<ConfigKey, std::uint32_t, ConfigHash> index_;
    std::size_t head_ = 0;
    bool frontier_ = false;
    bool cut_ = false;  // frontier caused by storage or configuration limits
};

}  // namespace

OracleVerdict bounded_solve(const GameArena& a, StateId initial, const Word& storage, const OracleBudget& budget,
                            Objective objective) {
    Explorer e(a, budget, objective);
    return e.solve(initial, storage);
}

OracleVerdict bounded_solve_rio(const GameArena& a, const Word& credit, const OracleBudget& budget) {
    return bounded_solve(a, a.initial(), credit, budget, Objective::Rio);
}

OracleVerdict bounded_solve_nontermination(const GameArena& a, const Word& credit, const OracleBudget& budget) {
    return bounded_solve(a, a.initial(), credit, budget, Objective::NonTermination);
}

void for_each_credit_candidate(const GameArena& a, std::size_t max_pushes, std::size_t max_group_len,
                               const std::function<bool(const Word&)>& visit) {
    const PresentationGraph& g = a.graph();
    ClassReport cls = classify(g);
    std::vector<VertexId> stack = g.unlooped_vertices();
    std::vector<VertexId> core;
    if (cls.kind == ClassKind::PdGrpTimesGrp)
        core = cls.decomposition.core;
    else
        core = g.looped_vertices();

    if (!visit(Word{}) || stack.empty() || max_pushes == 0) return;

    // Group elements by exact length, each layer sorted.
    std::vector<std::vector<Word>> ball{{Word{}}};
    {
        std::unordered_map<Word, int, WordHash> seen{{Word{}, 0}};
        for (std::size_t len = 1; len <= max_group_len; ++len) {
            std::vector<Word> layer;
            for (const Word& w : ball[len - 1])
                for (VertexId v : core)
                    for (bool inv : {true, false}) {
                        Word x = multiply(g, w, Letter{v, inv});
                        if (x.size() == len && seen.emplace(x, 0).second) layer.push_back(std::move(x));
                    }
            std::sort(layer.begin(), layer.end());
            if (layer.empty()) break;
            ball.push_back(std::move(layer));
        }
    }
    const std::size_t longest = ball.size() - 1;

    // Segments are chosen left to right; `left` is the length still to place.
    Word cur;
    std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t pushes, std::size_t left) -> bool {
        if (left == 0) return visit(cur);
        if (pushes == max_pushes) return true;
        for (VertexId u : stack) {
            cur.push_back(Letter{u, false});
            for (std::size_t len = 0; len <= std::min(longest, left - 1); ++len) {
                // The remaining pushes must be able to absorb what is left.
                const std::size_t rest = left - 1 - len;
                if (rest > 0 && (max_pushes - pushes - 1) == 0) continue;
                if (rest > (max_pushes - pushes - 1) * (1 + longest)) continue;
                for (const Word& w : ball[len]) {
                    cur.insert(cur.end(), w.begin(), w.end());
                    bool more = go(pushes + 1, rest);
                    cur.resize(cur.size() - w.size());
                    if (!more) return false;
                }
            }
            cur.pop_back();
        }
        return true;
    };
    // Overflow guard: the product below only matters while it stays small.
    const std::size_t cap = max_pushes > (std::size_t{1} << 20) ? (std::size_t{1} << 20) : max_pushes;
    for (std::size_t total = 1; total <= cap * (1 + longest); ++total)
        if (!go(0, total)) return;
}

std::vector<Word> credit_candidates(const GameArena& a, std::size_t max_pushes, std::size_t max_group_len, std::size_t limit) {
    std::vector<Word> out;
    if (limit == 0) return out;
    for_each_credit_candidate(a, max_pushes, max_group_len, [&](const Word& w) {
        out.push_back(w);
        return out.size() < limit;
    });
    return out;
}

CreditSearch enumerate_uv_credits(const GameArena& a, std::size_t max_pushes, std::size_t max_group_len,
                                  const OracleBudget& budget, std::size_t limit, bool collect_all) {
    CreditSearch r;
    auto candidates = credit_candidates(a, max_pushes, max_group_len, limit);
    r.truncated = candidates.size() >= limit;
    for (const Word& c : candidates) {
        ++r.tried;
        OracleVerdict v = bounded_solve_rio(a, c, budget);
        if (v.kind == OracleVerdict::Kind::ExistsWins) {
            if (!r.credit) r.credit = c;
            r.winners.push_back(c);
            if (!collect_all) return r;
        } else if (v.kind == OracleVerdict::Kind::ForallWins) {
            ++r.forall;
        } else {
            ++r.unknown;
        }
    }
    return r;
}

}  // namespace valence
