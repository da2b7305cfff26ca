#include <doctest.h>

#include <random>

#include "brute.hpp"
#include "fixtures.hpp"
#include "valence/classify.hpp"
#include "valence/errors.hpp"
#include "valence/oracle.hpp"
#include "valence/reductions.hpp"

using namespace valence;
using fixtures::make_arena;
using fixtures::make_graph;
using Kind = OracleVerdict::Kind;

namespace {

CounterMachine machine(std::vector<std::string> states, std::vector<CounterTransition> ts) {
    CounterMachine m;
    m.states = std::move(states);
    m.transitions = std::move(ts);
    m.check();
    return m;
}

OracleBudget budget() {
    OracleBudget b;
    b.max_configs = 50000;
    b.max_storage = 64;
    return b;
}

Word repeat(Letter x, std::size_t k) { return Word(k, x); }

// Random pushdown (energy) game with at most three states and two stack letters.
PushdownGame random_pushdown_game(std::mt19937_64& rng, std::size_t dimension) {
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    PushdownGame p;
    const std::size_t n = pick(1, 3), letters = pick(1, 2);
    for (std::size_t s = 0; s < n; ++s) {
        p.states.push_back("p" + std::to_string(s));
        p.owners.push_back(pick(0, 1) ? Owner::Forall : Owner::Exists);
    }
    for (std::size_t x = 0; x < letters; ++x) p.alphabet.push_back(std::string(1, static_cast<char>('s' + x)));
    p.dimension = dimension;
    const std::size_t rules = pick(1, 5);
    for (std::size_t i = 0; i < rules; ++i) {
        PushdownRule r;
        r.from = pick(0, n - 1);
        r.top = pick(0, letters - 1);
        r.to = pick(0, n - 1);
        for (std::size_t k = pick(0, 2); k > 0; --k) r.push.push_back(pick(0, letters - 1));
        for (std::size_t d = 0; d < dimension; ++d) r.effect.push_back(static_cast<int>(pick(0, 2)) - 1);
        p.rules.push_back(std::move(r));
    }
    for (std::size_t k = pick(1, 2); k > 0; --k) p.initial_stack.push_back(pick(0, letters - 1));
    for (std::size_t d = 0; d < dimension; ++d) p.initial_energy.push_back(static_cast<std::int64_t>(pick(0, 2)));
    p.check();
    return p;
}

std::optional<brute::Verdict> oracle_side(const GameArena& a, const Word& credit = {}) {
    OracleVerdict v = bounded_solve_rio(a, credit, budget());
    if (!v.certified()) return std::nullopt;
    return v.kind == Kind::ForallWins ? brute::Verdict::Forall : brute::Verdict::Exists;
}

}  // namespace

TEST_CASE("counter machine analysis and json") {
    CounterMachine loop = machine({"s0", "s1"}, {{0, CounterOp::Inc, 1, 1}, {1, CounterOp::Dec, 1, 0}});
    CHECK(analyze_runs(loop).kind == RunAnalysis::Kind::Infinite);
    CounterMachine fail = machine({"s0", "s1"}, {{0, CounterOp::Inc, 1, 1}, {1, CounterOp::Zero, 1, 1}});
    CHECK(analyze_runs(fail).kind == RunAnalysis::Kind::Finite);
    CounterMachine grow = machine({"s0"}, {{0, CounterOp::Inc, 1, 0}});
    CHECK(analyze_runs(grow, false, 100).kind == RunAnalysis::Kind::Unknown);
    CHECK(CounterMachine::from_json(loop.to_json()).to_json() == loop.to_json());
    CHECK_THROWS_AS(machine({"s0", "s1"}, {{0, CounterOp::Inc, 1, 1}}), InputError);
}

TEST_CASE("illegal graphs are recognized") {
    for (bool loop : {false, true}) {
        ClassReport i = classify(illegal_graph_i(loop));
        REQUIRE(i.kind == ClassKind::Undecidable);
        CHECK(i.witness->kind == 1);
        ClassReport ii = classify(illegal_graph_ii(loop));
        REQUIRE(ii.kind == ClassKind::Undecidable);
        CHECK(ii.witness->kind == 2);
    }
}

TEST_CASE("zero-test gadget on graph (ii): the check wins iff the tested counter is zero") {
    CounterMachine m = machine({"s0"}, {{0, CounterOp::Zero, 1, 0}, {0, CounterOp::Zero, 2, 0}});
    for (bool loop : {false, true}) {
        GameArena a = cm_to_game_ii(m, loop);
        const PresentationGraph& g = a.graph();
        const Letter b{g.index_of("b"), false}, c{g.index_of("c"), false};
        for (int k : {1, 2}) {
            const StateId check = a.state_index("s0.t" + std::to_string(k - 1) + ".check");
            for (std::size_t m1 = 0; m1 <= 3; ++m1)
                for (std::size_t m2 = 0; m2 <= 3; ++m2) {
                    Word storage = g.parse_word("b a");
                    for (Letter x : repeat(b, m1)) storage.push_back(x);
                    for (Letter x : repeat(c, m2)) storage.push_back(x);
                    OracleVerdict v = bounded_solve(a, check, reduce_word(g, storage), budget(), Objective::Rio);
                    const bool zero = (k == 1 ? m1 : m2) == 0;
                    CAPTURE(k);
                    CAPTURE(m1);
                    CAPTURE(m2);
                    REQUIRE(v.kind == (zero ? Kind::ExistsWins : Kind::ForallWins));
                }
        }
    }
}

TEST_CASE("zero-test gadget on graph (i)") {
    CounterMachine m = machine({"s0"}, {{0, CounterOp::Zero, 1, 0}, {0, CounterOp::Zero, 2, 0}});
    GameArena a = cm_to_game_i(m);
    const PresentationGraph& g = a.graph();
    const Letter b{g.index_of("b"), false}, c{g.index_of("c"), false};
    for (int k : {1, 2}) {
        const StateId check = a.state_index("s0.t" + std::to_string(k - 1) + ".check");
        for (std::size_t m1 = 0; m1 <= 3; ++m1)
            for (std::size_t m2 = 0; m2 <= 3; ++m2) {
                Word storage = g.parse_word("b a");
                for (Letter x : repeat(b, m1 + m2)) storage.push_back(x);
                for (Letter x : repeat(c, m2)) storage.push_back(x);
                OracleVerdict v = bounded_solve(a, check, reduce_word(g, storage), budget(), Objective::Rio);
                const bool zero = (k == 1 ? m1 : m2) == 0;
                REQUIRE(v.kind == (zero ? Kind::ExistsWins : Kind::ForallWins));
            }
    }
}

TEST_CASE("compiled machines: winners follow run existence") {
    std::vector<CounterMachine> ms = {
        machine({"s0", "s1"}, {{0, CounterOp::Inc, 1, 1}, {1, CounterOp::Dec, 1, 0}}),
        machine({"s0"}, {{0, CounterOp::Zero, 1, 0}}),
        machine({"s0", "s1"}, {{0, CounterOp::Inc, 1, 1}, {1, CounterOp::Zero, 1, 1}}),
        machine({"s0"}, {{0, CounterOp::Dec, 1, 0}}),
    };
    for (const auto& m : ms) {
        const bool infinite = analyze_runs(m).kind == RunAnalysis::Kind::Infinite;
        for (bool loop : {false, true})
            for (const GameArena& a : {cm_to_game_i(m, loop), cm_to_game_ii(m, loop)}) {
                CHECK(validate(a).ok());
                CHECK(classify(a.graph()).kind == ClassKind::Undecidable);
                OracleVerdict v = bounded_solve_rio(a, {}, budget());
                CHECK(v.kind == (infinite ? Kind::ExistsWins : Kind::ForallWins));
            }
    }
    // Unbounded counter: the universal player never wins.
    CounterMachine grow = machine({"s0"}, {{0, CounterOp::Inc, 1, 0}});
    CHECK(bounded_solve_rio(cm_to_game_ii(grow), {}, budget()).kind != Kind::ForallWins);
    CHECK(bounded_solve_rio(cm_to_game_i(grow), {}, budget()).kind != Kind::ForallWins);
}

TEST_CASE("non-termination gadget and the viability divergence") {
    CounterMachine fail = machine({"s0", "s1"}, {{0, CounterOp::Inc, 1, 1}, {1, CounterOp::Zero, 1, 1}});
    CompiledGame f = cm_to_nontermination_pdzvass(fail);
    CHECK(f.objective == Objective::NonTermination);
    CHECK(validate(f.arena).ok());
    CHECK(classify(f.arena.graph()).kind == ClassKind::PdGrpTimesGrp);
    CHECK(bounded_solve_nontermination(f.arena, {}, budget()).kind == Kind::ForallWins);

    CounterMachine zero_loop = machine({"s0", "s1"}, {{0, CounterOp::Zero, 1, 1}, {1, CounterOp::Zero, 1, 0}});
    CompiledGame z = cm_to_nontermination_pdzvass(zero_loop);
    OracleBudget b = budget();
    b.max_depth = 40;
    OracleVerdict nt = bounded_solve_nontermination(z.arena, {}, b);
    OracleVerdict rio = bounded_solve_rio(z.arena, {}, b);
    CHECK(nt.kind == Kind::Unknown);
    CHECK(nt.survival == 40);
    CHECK(rio.kind == Kind::ForallWins);
}

TEST_CASE("pushdown games: translation to viability preserves the winner") {
    std::mt19937_64 rng(61);
    int compared = 0;
    for (int i = 0; i < 300; ++i) {
        PushdownGame p = random_pushdown_game(rng, i % 3 == 0 ? 1 : 0);
        CHECK(PushdownGame::from_json(p.to_json()).to_json() == p.to_json());
        brute::Verdict truth = brute::solve_pushdown_game(p, 20000, 12, 12);
        GameArena a = energy_pushdown_to_viability(p);
        REQUIRE(validate(a).ok());
        if (p.dimension == 0) CHECK(pushdown_game_to_viability(p).to_json() == a.to_json());
        auto image = oracle_side(a);
        if (truth != brute::Verdict::Unknown && image) {
            INFO(p.to_json().dump());
            REQUIRE(*image == truth);
            ++compared;
        }
    }
    CHECK(compared > 150);
}

TEST_CASE("pushdown game examples") {
    // Universal pop on the wrong top letter: the existential player escapes.
    PushdownGame p;
    p.states = {"u", "e"};
    p.owners = {Owner::Forall, Owner::Exists};
    p.alphabet = {"s", "t"};
    p.rules = {{0, 1, 1, {}, {}}};
    p.initial_stack = {0};
    CHECK(brute::solve_pushdown_game(p) == brute::Verdict::Exists);
    CHECK(oracle_side(pushdown_game_to_viability(p)) == brute::Verdict::Exists);

    // One energy dimension drained by every move.
    PushdownGame d;
    d.states = {"p"};
    d.owners = {Owner::Exists};
    d.alphabet = {"s"};
    d.dimension = 1;
    d.rules = {{0, 0, 0, {0}, {-1}}};
    d.initial_stack = {0};
    d.initial_energy = {2};
    CHECK(brute::solve_pushdown_game(d) == brute::Verdict::Forall);
    CHECK(oracle_side(energy_pushdown_to_viability(d)) == brute::Verdict::Forall);
}

TEST_CASE("viability arenas back to pushdown games") {
    std::mt19937_64 rng(62);
    PresentationGraph g = make_graph({"s", "t", "e"}, {"e-s", "e-t"});
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        GameArena a(g);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        for (std::size_t s = 0; s < n; ++s) a.add_state("q" + std::to_string(s), rng() % 2 ? Owner::Forall : Owner::Exists);
        for (std::size_t k = 0; k < 5; ++k) {
            const auto from = static_cast<StateId>(rng() % n), to = static_cast<StateId>(rng() % n);
            if (a.has_transition(from, to)) continue;
            Word label;
            for (std::size_t l = rng() % 3; l > 0; --l) label.push_back(Letter{static_cast<VertexId>(rng() % 3), rng() % 2 == 0});
            a.add_transition(from, label, to);
        }
        a.set_initial(0);
        Word credit = g.parse_word(i % 2 ? "s e" : "t");
        PushdownGame p = viability_to_pushdown_game(a, credit);
        brute::Verdict truth = brute::solve_pushdown_game(p, 20000, 12, 12);
        auto direct = oracle_side(a, credit);
        if (truth != brute::Verdict::Unknown && direct) {
            INFO(a.to_json().dump());
            REQUIRE(*direct == truth);
            ++compared;
        }
    }
    CHECK(compared > 100);
}

TEST_CASE("relabeling path arenas") {
    std::mt19937_64 rng(63);
    PresentationGraph g = make_graph({"a", "b", "c"}, {"a-b", "b-c"});
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        GameArena a(g);
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
        for (std::size_t s = 0; s < n; ++s) a.add_state("q" + std::to_string(s), rng() % 2 ? Owner::Forall : Owner::Exists);
        for (StateId s = 0; s < n; ++s)
            for (std::size_t k = 0; k < 2; ++k) {
                const auto to = static_cast<StateId>(rng() % n);
                if (a.has_transition(s, to)) continue;
                Word label;
                for (std::size_t l = rng() % 3; l > 0; --l) label.push_back(Letter{static_cast<VertexId>(rng() % 3), rng() % 2 == 0});
                a.add_transition(s, label, to);
            }
        a.set_initial(0);
        GameArena r = relabel_iii_to_iv(a);
        ClassReport cls = classify(r.graph());
        REQUIRE(cls.kind == ClassKind::Undecidable);
        CHECK(cls.witness->kind == 4);
        auto x = oracle_side(a), y = oracle_side(r);
        if (x && y) {
            REQUIRE(*x == *y);
            ++compared;
        }
    }
    CHECK(compared > 100);
}
