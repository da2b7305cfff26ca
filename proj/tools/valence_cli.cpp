#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "valence/arena.hpp"
#include "valence/classify.hpp"
#include "valence/errors.hpp"
#include "valence/oracle.hpp"
#include "valence/reductions.hpp"
#include "valence/solver_fv.hpp"
#include "valence/solver_uv.hpp"

using namespace valence;
using json = nlohmann::json;

namespace {

constexpr int kExists = 0;
constexpr int kForall = 10;
constexpr int kUnknown = 20;
constexpr int kInputError = 2;

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json(const std::string& text, const std::string& path) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& ex) {
        throw InputError("'" + path + "' is not valid JSON: " + ex.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

struct Run {
    json report;
    bool timings = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void input(const std::string& bytes) { report["input_sha256"] = sha256_hex(bytes); }
    int finish(int code) {
        report["exit_code"] = code;
        if (timings)
            report["timings"] = {{"wall_ms", std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count()}};
        std::cout << report.dump(2) << "\n";
        return code;
    }
};

int exit_for(Winner w) { return w == Winner::Exists ? kExists : kForall; }

int exit_for(const OracleVerdict& v) {
    switch (v.kind) {
        case OracleVerdict::Kind::ExistsWins: return kExists;
        case OracleVerdict::Kind::ForallWins: return kForall;
        case OracleVerdict::Kind::Unknown: return kUnknown;
    }
    return kUnknown;
}

const char* kind_code(OracleVerdict::Kind k) {
    switch (k) {
        case OracleVerdict::Kind::ExistsWins: return "E";
        case OracleVerdict::Kind::ForallWins: return "A";
        case OracleVerdict::Kind::Unknown: return "unknown";
    }
    return "?";
}

json oracle_json(const OracleVerdict& v) {
    json j = {{"winner", kind_code(v.kind)}, {"explored", v.explored}, {"depth_bound", v.depth_bound}};
    if (v.kind == OracleVerdict::Kind::ForallWins) j["attractor_rank"] = v.depth;
    if (v.survival) j["survives_steps"] = v.survival;
    return j;
}

void configure_logging() {
    auto logger = spdlog::stderr_color_mt("valence");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("VALENCE_LOG")) spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
    configure_logging();

    CLI::App app{"Viability games on valence systems over graph monoids"};
    app.require_subcommand(1);
    app.fallthrough();
    bool timings = false;
    unsigned threads = 1;
    app.add_flag("--timings", timings, "Add wall-clock timings to the report");
    app.add_option("--threads", threads, "Worker threads for candidate enumeration")->check(CLI::Range(1u, 256u));

    std::string input, credit_text, output;

    auto* classify_cmd = app.add_subcommand("classify", "Classify the storage graph of an arena or graph file");
    classify_cmd->add_option("file", input, "Arena or graph JSON")->required();

    auto* solve_cmd = app.add_subcommand("solve", "Decide a viability game");
    solve_cmd->require_subcommand(1);
    auto* fv_cmd = solve_cmd->add_subcommand("fv", "Fixed initial credit");
    std::string certificate_path, encoding = "native";
    fv_cmd->add_option("file", input, "Arena JSON")->required();
    fv_cmd->add_option("--credit", credit_text, "Initial credit, letters separated by spaces, x- for the inverse");
    fv_cmd->add_option("--certificate", certificate_path, "Write the universal strategy tree here when the universal player wins");
    fv_cmd->add_option("--encoding", encoding, "Stack encoding")->check(CLI::IsMember({"native", "single"}));
    auto* uv_cmd = solve_cmd->add_subcommand("uv", "Unknown initial credit");
    bool want_witness = false;
    uv_cmd->add_option("file", input, "Arena JSON")->required();
    uv_cmd->add_flag("--witness", want_witness, "Search for a winning credit within the bounds");

    auto* oracle_cmd = app.add_subcommand("oracle", "Bounded explicit-state exploration");
    std::string objective = "rio";
    OracleBudget budget;
    std::vector<std::size_t> enumerate;
    oracle_cmd->add_option("file", input, "Arena JSON")->required();
    oracle_cmd->add_option("--credit", credit_text, "Initial credit");
    oracle_cmd->add_option("--objective", objective)->check(CLI::IsMember({"rio", "nontermination"}));
    oracle_cmd->add_option("--max-configs", budget.max_configs);
    oracle_cmd->add_option("--max-depth", budget.max_depth);
    oracle_cmd->add_option("--max-storage", budget.max_storage);
    oracle_cmd->add_option("--enumerate", enumerate, "PUSHES GROUP_LEN: try every credit of that shape")->expected(2);

    auto* compile_cmd = app.add_subcommand("compile", "Compile a machine or game into an arena");
    compile_cmd->require_subcommand(1);
    auto* cm_cmd = compile_cmd->add_subcommand("cm", "Two-counter machine");
    std::string target;
    bool loop_on_a = false;
    cm_cmd->add_option("file", input, "Counter machine JSON")->required();
    cm_cmd->add_option("--target", target)->required()->check(CLI::IsMember({"i", "ii", "pdzvass"}));
    cm_cmd->add_flag("--loop-on-a", loop_on_a, "Use the variant of the target graph with a looped a");
    cm_cmd->add_option("-o,--output", output, "Write the arena here instead of stdout");
    auto* pd_cmd = compile_cmd->add_subcommand("pushdown", "Pushdown (energy) game");
    pd_cmd->add_option("file", input, "Pushdown game JSON")->required();
    pd_cmd->add_option("-o,--output", output, "Write the arena here instead of stdout");

    auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of an arena");
    dot_cmd->add_option("file", input, "Arena JSON")->required();
    dot_cmd->add_option("-o,--output", output, "Write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    Run run;
    run.timings = timings;
    try {
        const std::string bytes = read_file(input);
        const json doc = parse_json(bytes, input);

        if (*classify_cmd) {
            run.report["command"] = "classify";
            run.input(bytes);
            PresentationGraph g = doc.contains("graph") ? PresentationGraph::from_json(doc.at("graph")) : PresentationGraph::from_json(doc);
            run.report["classification"] = to_json(classify(g), g);
            return run.finish(0);
        }

        if (*dot_cmd) {
            GameArena a = GameArena::from_json(doc);
            if (output.empty()) {
                std::cout << a.to_dot();
                return 0;
            }
            const std::string dot = a.to_dot();
            write_file(output, dot);
            run.report["command"] = "export-dot";
            run.input(bytes);
            run.report["output"] = {{"path", output}, {"sha256", sha256_hex(dot)}};
            return run.finish(0);
        }

        if (*compile_cmd) {
            GameArena a = [&] {
                if (*cm_cmd) {
                    CounterMachine m = CounterMachine::from_json(doc);
                    if (target == "i") return cm_to_game_i(m, loop_on_a);
                    if (target == "ii") return cm_to_game_ii(m, loop_on_a);
                    return cm_to_nontermination_pdzvass(m).arena;
                }
                return energy_pushdown_to_viability(PushdownGame::from_json(doc));
            }();
            const std::string text = a.to_json().dump(2) + "\n";
            if (output.empty()) {
                std::cout << text;
                return 0;
            }
            write_file(output, text);
            run.report["command"] = *cm_cmd ? "compile cm" : "compile pushdown";
            run.input(bytes);
            if (*cm_cmd) {
                run.report["target"] = target;
                run.report["objective"] = target == "pdzvass" ? "nontermination" : "rio";
            }
            run.report["states"] = a.state_count();
            run.report["output"] = {{"path", output}, {"sha256", sha256_hex(text)}};
            return run.finish(0);
        }

        GameArena a = GameArena::from_json(doc);
        const Word credit = a.graph().parse_word(credit_text);
        run.input(bytes);
        run.report["classification"] = to_json(classify(a.graph()), a.graph());

        if (*oracle_cmd) {
            run.report["command"] = "oracle";
            run.report["objective"] = objective;
            const Objective obj = objective == "rio" ? Objective::Rio : Objective::NonTermination;
            if (enumerate.empty()) {
                run.report["credit"] = a.graph().format_word(credit);
                OracleVerdict v = bounded_solve(a, a.initial(), credit, budget, obj);
                run.report["verdict"] = oracle_json(v);
                return run.finish(exit_for(v));
            }
            std::vector<Word> candidates = credit_candidates(a, enumerate[0], enumerate[1], 100000);
            std::vector<OracleVerdict> verdicts(candidates.size());
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back([&] {
                    for (std::size_t i; (i = next++) < candidates.size();)
                        verdicts[i] = bounded_solve(a, a.initial(), candidates[i], budget, obj);
                });
            for (auto& t : pool) t.join();
            json rows = json::array();
            int code = kForall;
            for (std::size_t i = 0; i < candidates.size(); ++i) {
                json row = oracle_json(verdicts[i]);
                row["credit"] = a.graph().format_word(candidates[i]);
                rows.push_back(std::move(row));
                if (verdicts[i].kind == OracleVerdict::Kind::ExistsWins) code = kExists;
                else if (verdicts[i].kind == OracleVerdict::Kind::Unknown && code == kForall) code = kUnknown;
            }
            run.report["candidates"] = std::move(rows);
            return run.finish(code);
        }

        if (*fv_cmd) {
            run.report["command"] = "solve fv";
            run.report["credit"] = a.graph().format_word(credit);
            SolverOptions options;
            options.stack_encoding = encoding == "single" ? StackEncoding::SingleLetter : StackEncoding::Native;
            options.want_certificate = !certificate_path.empty();
            FvVerdict v = solve_fv(a, credit, options);
            run.report["verdict"] = {{"winner", winner_code(v.winner)}, {"rounds", v.rounds}, {"cayley_nodes", v.cayley_nodes}};
            if (v.certificate) {
                const std::string text = v.certificate->dump(2) + "\n";
                write_file(certificate_path, text);
                run.report["certificate"] = {{"path", certificate_path}, {"sha256", sha256_hex(text)}};
            }
            return run.finish(exit_for(v.winner));
        }

        run.report["command"] = "solve uv";
        UvOptions options;
        options.want_witness = want_witness;
        UvVerdict v = solve_uv(a, options);
        json verdict = {{"winner", winner_code(v.winner)}, {"normal_form_states", v.n}, {"guess_states", v.guess_states},
                        {"rounds", v.rounds}};
        if (want_witness && v.winner == Winner::Exists) {
            verdict["witness"] = v.witness ? json(a.graph().format_word(*v.witness)) : json(nullptr);
            verdict["candidates_tried"] = v.candidates_tried;
        }
        run.report["verdict"] = std::move(verdict);
        return run.finish(exit_for(v.winner));
    } catch (const UndecidableClassError& e) {
        run.report["refused"] = e.what();
        return run.finish(kUnknown);
    } catch (const ResourceError& e) {
        run.report["budget_exceeded"] = e.what();
        return run.finish(kUnknown);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
