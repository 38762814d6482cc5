// promise: run, verify and compare programs over finite structures.

#include "promise/equivalence.hpp"
#include "promise/error.hpp"
#include "promise/evaluator.hpp"
#include "promise/problems.hpp"
#include "promise/program.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace promise;
using json = nlohmann::json;

namespace {

constexpr int kUsage = 64;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << data))
        throw Error(ErrorKind::Io, "cannot write " + path);
}

struct Common {
    std::string format = "text";
    bool no_timing = false;
};

void emit(const Common& c, const json& j, const std::string& text) {
    if (c.format == "json")
        std::cout << j.dump(2) << '\n';
    else
        std::cout << text;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json bounds_json(const Bounds& b, int k) {
    return {{"k", k},
            {"max_trace_length", b.trace_cap},
            {"max_witness_length", b.witness_cap},
            {"max_antidomain_depth", b.depth_cap},
            {"max_nodes", b.node_cap}};
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
    std::string program, structure, witness;
    int k = 2;
    std::optional<std::size_t> max_len;
};

int cmd_run(const RunArgs& a, const Common& c) {
    auto program_text = read_file(a.program);
    auto structure_text = read_file(a.structure);
    auto p = parse_program(program_text);
    auto s = parse_structure(structure_text);
    check_vocabulary(p, s);
    SearchConfig cfg;
    cfg.k = a.k;
    cfg.max_trace_length = a.max_len;
    auto t0 = std::chrono::steady_clock::now();
    auto v = run_main_task(p, s, cfg);
    double elapsed = seconds_since(t0);

    json j;
    j["verdict"] = std::string(to_string(v.kind));
    j["nodes"] = v.nodes;
    j["bounds"] = bounds_json(v.bounds, a.k);
    j["witness"] = nullptr;
    j["trace_length"] = nullptr;
    if (!c.no_timing)
        j["seconds"] = elapsed;
    if (v.witness) {
        j["trace_length"] = v.witness->final_length;
        if (!a.witness.empty()) {
            write_file(a.witness, witness_to_json(*v.witness, program_text, structure_text));
            j["witness"] = a.witness;
        }
    }
    std::ostringstream text;
    text << "verdict: " << to_string(v.kind) << '\n';
    if (v.witness)
        text << "trace length: " << v.witness->final_length << '\n';
    if (v.witness && !a.witness.empty())
        text << "witness: " << a.witness << '\n';
    text << "nodes: " << v.nodes << '\n';
    text << "bounds: k=" << a.k << " max_trace_length=" << v.bounds.trace_cap
         << " max_witness_length=" << v.bounds.witness_cap << " max_antidomain_depth=" << v.bounds.depth_cap << '\n';
    if (!c.no_timing)
        text << "seconds: " << elapsed << '\n';
    emit(c, j, text.str());
    switch (v.kind) {
    case VerdictKind::Yes: return 0;
    case VerdictKind::No: return 1;
    default: return 2;
    }
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
    std::string program, structure, witness;
};

int cmd_verify(const VerifyArgs& a, const Common& c) {
    auto program_text = read_file(a.program);
    auto structure_text = read_file(a.structure);
    auto witness_text = read_file(a.witness);
    auto t0 = std::chrono::steady_clock::now();
    auto r = verify_witness_file(program_text, structure_text, witness_text);
    double elapsed = seconds_since(t0);
    json j{{"valid", r.ok}, {"reason", std::string(to_string(r.failure))}, {"detail", r.detail}};
    if (!c.no_timing)
        j["seconds"] = elapsed;
    std::string text = r.ok ? "valid\n" : "invalid: " + (r.detail.empty() ? std::string(to_string(r.failure)) : r.detail) + "\n";
    if (r.failure == VerifyFailure::HashMismatch)
        std::cerr << "hash mismatch: " << r.detail << '\n';
    emit(c, j, text);
    return r.ok ? 0 : 1;
}

// ---- equiv -----------------------------------------------------------------

struct EquivArgs {
    std::string left, right, program, structure, mode = "strong";
    int k = 2;
    std::optional<std::size_t> max_len;
};

TermPtr checked_term(const Program& p, const std::string& text) {
    auto t = parse_term(text);
    auto diags = validate_term(p, *t);
    if (!diags.empty())
        throw Error(diags.front().kind, diags.front().message);
    return desugar(t);
}

int cmd_equiv(const EquivArgs& a, const Common& c) {
    auto p = parse_program(read_file(a.program));
    auto s = parse_structure(read_file(a.structure));
    check_vocabulary(p, s);
    auto left = checked_term(p, a.left);
    auto right = checked_term(p, a.right);
    SearchConfig cfg;
    cfg.k = a.k;
    cfg.max_trace_length = a.max_len;
    std::vector<Trace> bases{Trace(s)};
    auto r = a.mode == "strong" ? strongly_equivalent(p, left, right, bases, cfg)
                                : before_after_equivalent(p, left, right, bases, cfg);
    json j{{"verdict", std::string(to_string(r.verdict))},
           {"mode", a.mode},
           {"bounds", {{"k", a.k}, {"max_trace_length", r.trace_cap}}}};
    std::ostringstream text;
    text << to_string(r.verdict) << " (" << a.mode << ", k=" << a.k << ", max_trace_length=" << r.trace_cap
         << ", base: input letter)\n";
    emit(c, j, text.str());
    switch (r.verdict) {
    case Tri::True: return 0;
    case Tri::False: return 1;
    default: return 2;
    }
}

// ---- suite -----------------------------------------------------------------

struct SuiteArgs {
    std::string problem = "all";
    std::string n_range;
    std::size_t trials = 1;
    std::uint64_t seed = 1;
    unsigned jobs = 0;
    int k = 2;
};

std::pair<std::size_t, std::size_t> default_range(ProblemId id) {
    switch (id) {
    case ProblemId::SizeFour: return {1, 6};
    case ProblemId::Even: return {1, 7};
    case ProblemId::SameSize: return {1, 6};
    case ProblemId::StConnectivity: return {1, 5};
    case ProblemId::SameGeneration: return {1, 7};
    case ProblemId::Mod2LinEq: return {1, 3};
    }
    return {1, 1};
}

InstanceParams params_for(ProblemId id, std::size_t n, std::mt19937_64& rng) {
    InstanceParams ip;
    ip.n = n;
    auto upto = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(0, hi)(rng); };
    switch (id) {
    case ProblemId::SameSize:
        ip.a = upto(std::min<std::size_t>(4, n));
        ip.b = upto(std::min<std::size_t>(4, n));
        break;
    case ProblemId::StConnectivity:
        ip.edge_probability = std::uniform_real_distribution<double>(0.1, 0.6)(rng);
        break;
    case ProblemId::Mod2LinEq:
        ip.a = n;
        ip.b = upto(std::min<std::size_t>(3, 2 * n * n * n));
        break;
    default:
        break;
    }
    return ip;
}

struct Outcome {
    bool agree = false;
    bool bound = false;
};

int cmd_suite(const SuiteArgs& a, const Common& c) {
    std::vector<ProblemId> problems;
    if (a.problem == "all") {
        problems = all_problems();
    } else if (auto id = problem_from_name(a.problem)) {
        problems.push_back(*id);
    } else {
        throw Error(ErrorKind::InvalidParams, "unknown problem " + a.problem);
    }
    std::optional<std::pair<std::size_t, std::size_t>> range;
    if (!a.n_range.empty()) {
        auto dots = a.n_range.find("..");
        if (dots == std::string::npos)
            throw Error(ErrorKind::InvalidParams, "--n-range expects A..B");
        range.emplace(std::stoul(a.n_range.substr(0, dots)), std::stoul(a.n_range.substr(dots + 2)));
        if (range->first > range->second)
            throw Error(ErrorKind::InvalidParams, "empty --n-range");
    }
    unsigned jobs = a.jobs ? a.jobs : std::max(1U, std::thread::hardware_concurrency());
    SearchConfig cfg;
    cfg.k = a.k;

    json report = json::array();
    std::ostringstream text;
    bool all_ok = true;
    for (auto id : problems) {
        auto [lo, hi] = range.value_or(default_range(id));
        std::mt19937_64 rng(a.seed);
        std::vector<std::pair<std::size_t, Structure>> instances;
        for (std::size_t n = lo; n <= hi; ++n)
            for (std::size_t t = 0; t < a.trials; ++t) {
                auto ip = params_for(id, n, rng);
                instances.emplace_back(n, build_instance(id, ip, rng()));
            }
        auto program = build_program(id);
        auto t0 = std::chrono::steady_clock::now();
        std::vector<Outcome> outcomes(instances.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < instances.size(); i = next++) {
                auto v = run_main_task(program, instances[i].second, cfg);
                bool expect = oracle(id, instances[i].second);
                outcomes[i].bound = v.kind == VerdictKind::BoundExceeded;
                outcomes[i].agree = !outcomes[i].bound && (v.kind == VerdictKind::Yes) == expect;
            }
        };
        std::vector<std::future<void>> pool;
        for (unsigned j = 1; j < jobs; ++j)
            pool.push_back(std::async(std::launch::async, worker));
        worker();
        for (auto& f : pool)
            f.get();
        double elapsed = seconds_since(t0);
        std::size_t agree = 0;
        std::size_t bound = 0;
        for (const auto& o : outcomes) {
            agree += o.agree;
            bound += o.bound;
        }
        bool ok = agree == instances.size() && bound == 0;
        all_ok = all_ok && ok;
        json row{{"problem", std::string(problem_name(id))},
                 {"n_range", std::to_string(lo) + ".." + std::to_string(hi)},
                 {"instances", instances.size()},
                 {"agree", agree},
                 {"bound_exceeded", bound}};
        if (!c.no_timing)
            row["seconds"] = elapsed;
        report.push_back(row);
        text << problem_name(id) << "  n=" << lo << ".." << hi << "  " << agree << "/" << instances.size()
             << " agree  bound-exceeded=" << bound;
        if (!c.no_timing)
            text << "  " << elapsed << "s";
        text << '\n';
    }
    emit(c, json{{"problems", report}, {"ok", all_ok}, {"seed", a.seed}, {"trials", a.trials}}, text.str());
    return all_ok ? 0 : 1;
}

// ---- emit ------------------------------------------------------------------

struct EmitArgs {
    std::string problem;
    bool instance = false;
    InstanceParams params;
    std::uint64_t seed = 1;
};

int cmd_emit(const EmitArgs& a) {
    auto id = problem_from_name(a.problem);
    if (!id)
        throw Error(ErrorKind::InvalidParams, "unknown problem " + a.problem);
    if (a.instance)
        std::cout << serialize_structure(build_instance(*id, a.params, a.seed));
    else
        std::cout << program_text(*id);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide, certify and compare nondeterministic programs over finite structures."};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", common.format, "text or json")->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--no-timing", common.no_timing, "omit wall-clock fields");
    };

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "decide whether the program has a successful execution");
    run_cmd->add_option("--program", run.program)->required();
    run_cmd->add_option("--structure", run.structure)->required();
    run_cmd->add_option("--k", run.k, "exponent of the length bound")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--max-len", run.max_len, "maximum trace length (letters)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--witness", run.witness, "write the witness here on yes");
    add_common(run_cmd);

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "replay a witness without search");
    verify_cmd->add_option("--program", verify.program)->required();
    verify_cmd->add_option("--structure", verify.structure)->required();
    verify_cmd->add_option("--witness", verify.witness)->required();
    add_common(verify_cmd);

    EquivArgs equiv;
    auto* equiv_cmd = app.add_subcommand("equiv", "compare two terms on the input letter");
    equiv_cmd->add_option("--left", equiv.left)->required();
    equiv_cmd->add_option("--right", equiv.right)->required();
    equiv_cmd->add_option("--program", equiv.program)->required();
    equiv_cmd->add_option("--structure", equiv.structure)->required();
    equiv_cmd->add_option("--mode", equiv.mode)->check(CLI::IsMember({"strong", "before-after"}));
    equiv_cmd->add_option("--k", equiv.k)->check(CLI::NonNegativeNumber);
    equiv_cmd->add_option("--max-len", equiv.max_len)->check(CLI::PositiveNumber);
    add_common(equiv_cmd);

    SuiteArgs suite;
    auto* suite_cmd = app.add_subcommand("suite", "check bundled problems against their oracles");
    suite_cmd->add_option("--problem", suite.problem, "problem name or all");
    suite_cmd->add_option("--n-range", suite.n_range, "A..B");
    suite_cmd->add_option("--trials", suite.trials)->check(CLI::PositiveNumber);
    suite_cmd->add_option("--seed", suite.seed);
    suite_cmd->add_option("--jobs", suite.jobs, "worker threads (default: all cores)");
    suite_cmd->add_option("--k", suite.k)->check(CLI::NonNegativeNumber);
    add_common(suite_cmd);

    EmitArgs emit_args;
    auto* emit_cmd = app.add_subcommand("emit", "print a bundled program, or an instance with --instance");
    emit_cmd->add_option("--problem", emit_args.problem)->required();
    emit_cmd->add_flag("--instance", emit_args.instance);
    emit_cmd->add_option("--n", emit_args.params.n);
    emit_cmd->add_option("--a", emit_args.params.a);
    emit_cmd->add_option("--b", emit_args.params.b);
    emit_cmd->add_option("--edge-probability", emit_args.params.edge_probability);
    emit_cmd->add_option("--seed", emit_args.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*run_cmd)
            return cmd_run(run, common);
        if (*verify_cmd)
            return cmd_verify(verify, common);
        if (*equiv_cmd)
            return cmd_equiv(equiv, common);
        if (*suite_cmd)
            return cmd_suite(suite, common);
        if (*emit_cmd)
            return cmd_emit(emit_args);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        if (*verify_cmd)
            return 1; // verification has no usage-error exit
        return kUsage;
    }
    return kUsage;
}
