// Command-line front end: solve, verify, generate, export, bench and stats
// subcommands over the library. Exit codes: 0 feasible/success, 1 infeasible
// or failed verification, 2 timed out, 64 usage error, 65 bad input data.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "evolomino/bench.hpp"
#include "evolomino/generator.hpp"
#include "evolomino/grid.hpp"
#include "evolomino/model.hpp"
#include "evolomino/rules.hpp"
#include "evolomino/solver.hpp"

using json = nlohmann::json;
using namespace evolomino;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitData = 65;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

json stats_json(const SolveStats& st) {
    return {{"nodes", st.nodes},
            {"propagation_rounds", st.propagation_rounds},
            {"millis", st.millis}};
}

json model_stats_json(const ModelStats& st) {
    json vars, rows;
    for (int f = 0; f < kVarFamilyCount; ++f)
        vars[var_family_name(static_cast<VarFamily>(f))] = st.vars_by_family[f];
    vars["total"] = st.var_total;
    for (int t = 0; t < kTagCount; ++t)
        rows[tag_name(static_cast<Tag>(t))] = st.rows_by_tag[t];
    rows["total"] = st.constraint_total;
    return {{"command", "stats"},
            {"convention",
             st.convention == StatsConvention::Paper ? "paper" : "structural"},
            {"variables", vars},
            {"constraints", rows}};
}

struct BuildFlags {
    bool literal_region = false;
    bool omit_arrow_pair_flows = false;
    bool tight_big_m = false;

    BuildOptions options() const {
        BuildOptions o;
        o.prune_region_by_foreign_givens = !literal_region;
        o.include_arrow_pair_flows = !omit_arrow_pair_flows;
        o.tight_big_m = tight_big_m;
        return o;
    }
};

void add_build_flags(CLI::App* cmd, BuildFlags& flags) {
    cmd->add_flag("--literal-region", flags.literal_region,
                  "region wave blocked by shaded cells and foreign arrows only");
    cmd->add_flag("--omit-arrow-pair-flows", flags.omit_arrow_pair_flows,
                  "drop flow variables between two on-path cells");
    cmd->add_flag("--tight-big-m", flags.tight_big_m, "per-arrow big-M constants");
}

int run_solve(const std::string& puzzle_path, double time_limit, int enumerate_cap,
              const std::string& lp_path, bool show_stats, bool as_json,
              const BuildFlags& flags) {
    Puzzle p = parse_puzzle(read_file(puzzle_path));
    IlpModel m = build_model(p, flags.options());
    if (!lp_path.empty()) write_file(lp_path, export_lp(m));

    SolveLimits limits;
    limits.time_limit_seconds = time_limit;

    if (enumerate_cap > 0) {
        EnumerateResult r = enumerate(m, enumerate_cap, limits);
        json out = {{"command", "solve"},
                    {"status", r.solutions.empty()
                                   ? (r.exhausted ? "Infeasible" : "TimedOut")
                                   : "Feasible"},
                    {"enumeration",
                     {{"count", r.solutions.size()},
                      {"exhausted", r.exhausted},
                      {"truncated", r.truncated}}},
                    {"stats", stats_json(r.total)}};
        json sols = json::array();
        for (const SolutionGrid& s : r.solutions) sols.push_back(serialize_solution(p, s));
        out["solutions"] = sols;
        if (as_json) {
            std::cout << out.dump() << "\n";
        } else {
            for (const SolutionGrid& s : r.solutions)
                std::cout << serialize_solution(p, s) << "\n";
            std::cout << r.solutions.size() << " solution(s)\n";
            if (r.exhausted && r.solutions.size() == 1) std::cout << "proved unique\n";
            else if (r.exhausted) std::cout << "no further solutions\n";
            else if (r.truncated) std::cout << "truncated by limits\n";
            if (show_stats)
                std::cout << "nodes " << r.total.nodes << " propagation_rounds "
                          << r.total.propagation_rounds << " millis " << r.total.millis
                          << "\n";
        }
        if (!r.solutions.empty()) return 0;
        return r.exhausted ? 1 : 2;
    }

    SolveOutcome o = solve(m, limits);
    if (as_json) {
        json out = {{"command", "solve"},
                    {"status", to_string(o.status)},
                    {"stats", stats_json(o.stats)}};
        if (o.status == SolveStatus::Feasible)
            out["solution"] = serialize_solution(p, o.solution);
        std::cout << out.dump() << "\n";
    } else {
        switch (o.status) {
            case SolveStatus::Feasible: std::cout << serialize_solution(p, o.solution); break;
            case SolveStatus::Infeasible: std::cout << "infeasible\n"; break;
            case SolveStatus::TimedOut: std::cout << "timed out\n"; break;
        }
        if (show_stats)
            std::cout << "nodes " << o.stats.nodes << " propagation_rounds "
                      << o.stats.propagation_rounds << " millis " << o.stats.millis << "\n";
    }
    switch (o.status) {
        case SolveStatus::Feasible: return 0;
        case SolveStatus::Infeasible: return 1;
        default: return 2;
    }
}

int run_verify(const std::string& puzzle_path, const std::string& solution_path,
               bool as_json) {
    Puzzle p = parse_puzzle(read_file(puzzle_path));
    SolutionGrid s = parse_solution(read_file(solution_path));
    if (s.rows != p.rows || s.cols != p.cols)
        throw std::runtime_error("solution dimensions do not match puzzle");
    auto violations = verify(p, s);
    if (as_json) {
        json vs = json::array();
        for (const Violation& v : violations) {
            json cells = json::array();
            for (Coord c : v.cells) cells.push_back({c.row, c.col});
            vs.push_back({{"rule", rule_name(v.rule)}, {"detail", v.detail}, {"cells", cells}});
        }
        std::cout << json{{"command", "verify"}, {"ok", violations.empty()},
                          {"violations", vs}}
                         .dump()
                  << "\n";
    } else if (violations.empty()) {
        std::cout << "OK\n";
    } else {
        for (const Violation& v : violations) std::cout << to_string(v) << "\n";
    }
    return violations.empty() ? 0 : 1;
}

int run_generate(int rows, int cols, uint64_t seed, bool seed_given, int count,
                 GenParams params, const std::string& out_dir, bool as_json,
                 const BuildFlags& flags) {
    namespace fs = std::filesystem;
    if (!seed_given) {
        seed = std::random_device{}();
        std::cout << "seed " << seed << "\n";
    }
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        params.seed = seed + static_cast<uint64_t>(i);
        GenOutcome out = generate(rows, cols, params, flags.options());
        std::string name = "evo_" + std::to_string(rows) + "x" + std::to_string(cols) + "_s" +
                           std::to_string(params.seed);
        fs::path base = fs::path(out_dir);
        write_file((base / (name + ".puzzle")).string(), serialize_puzzle(out.puzzle));
        write_file((base / (name + ".solution")).string(),
                   serialize_solution(out.puzzle, out.solution));
        json meta = {{"command", "generate"},
                     {"name", name},
                     {"rows", rows},
                     {"cols", cols},
                     {"seed", params.seed},
                     {"fill", out.fill},
                     {"givens", out.givens},
                     {"shaded", out.shaded},
                     {"probes", out.probes},
                     {"params",
                      {{"target_fill", params.target_fill},
                       {"max_tries", params.max_tries},
                       {"min_arrow", params.min_arrow},
                       {"p_stop_arrow", params.p_stop_arrow},
                       {"min_blocks", params.min_blocks},
                       {"p_stop_blocks", params.p_stop_blocks},
                       {"straight_bias", params.straight_bias}}},
                     {"puzzle_file", (base / (name + ".puzzle")).string()},
                     {"solution_file", (base / (name + ".solution")).string()}};
        std::ofstream meta_out(base / "metadata.jsonl", std::ios::app);
        meta_out << meta.dump() << "\n";
        if (as_json)
            std::cout << meta.dump() << "\n";
        else
            std::cout << name << " fill=" << out.fill << " givens=" << out.givens
                      << " shaded=" << out.shaded << " probes=" << out.probes << "\n";
    }
    return 0;
}

int run_bench(const std::string& dir, double time_limit, int jobs, const std::string& csv_path,
              const std::string& table_path) {
    SolveLimits limits;
    limits.time_limit_seconds = time_limit;
    BenchRun run = bench_run(dir, limits, jobs);
    write_file(csv_path, to_csv(run.records));
    std::string table = to_markdown(summarize(run.records));
    if (!table_path.empty()) write_file(table_path, table);
    std::cout << table;
    std::cout << run.records.size() << " instance(s); model build total "
              << run.build_ms_total << " ms (solve times in the CSV)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evolomino puzzle toolkit"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve a puzzle file");
    std::string solve_puzzle;
    double solve_time_limit = 0;
    int solve_enumerate = 0;
    std::string solve_lp;
    bool solve_stats = false, solve_json = false;
    BuildFlags solve_flags;
    solve_cmd->add_option("puzzle", solve_puzzle)->required();
    solve_cmd->add_option("--time-limit", solve_time_limit, "seconds, 0 = unlimited");
    solve_cmd->add_option("--enumerate", solve_enumerate, "enumerate up to CAP solutions");
    solve_cmd->add_option("--export-lp", solve_lp, "also write the model in LP format");
    solve_cmd->add_flag("--stats", solve_stats, "print search statistics");
    solve_cmd->add_flag("--json", solve_json);
    add_build_flags(solve_cmd, solve_flags);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check a solution against the rules");
    std::string verify_puzzle, verify_solution;
    bool verify_json = false;
    verify_cmd->add_option("puzzle", verify_puzzle)->required();
    verify_cmd->add_option("solution", verify_solution)->required();
    verify_cmd->add_flag("--json", verify_json);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "generate puzzles with unique solutions");
    int gen_rows = 0, gen_cols = 0, gen_count = 1;
    uint64_t gen_seed = 0;
    GenParams gen_params;
    std::string gen_out = ".";
    bool gen_json = false;
    BuildFlags gen_flags;
    gen_cmd->add_option("--rows", gen_rows)->required();
    gen_cmd->add_option("--cols", gen_cols)->required();
    auto* seed_opt = gen_cmd->add_option("--seed", gen_seed, "RNG seed (printed if drawn)");
    gen_cmd->add_option("--target-fill", gen_params.target_fill);
    gen_cmd->add_option("--tries", gen_params.max_tries);
    gen_cmd->add_option("--min-arrow", gen_params.min_arrow);
    gen_cmd->add_option("--p-stop-arrow", gen_params.p_stop_arrow);
    gen_cmd->add_option("--min-blocks", gen_params.min_blocks);
    gen_cmd->add_option("--p-stop-blocks", gen_params.p_stop_blocks);
    gen_cmd->add_option("--straight-bias", gen_params.straight_bias);
    gen_cmd->add_option("--count", gen_count, "number of puzzles (seed increments)");
    gen_cmd->add_option("--out", gen_out, "output directory");
    gen_cmd->add_flag("--json", gen_json);
    add_build_flags(gen_cmd, gen_flags);

    // export
    auto* export_cmd = app.add_subcommand("export", "write the ILP model in LP format");
    std::string export_puzzle, export_out;
    BuildFlags export_flags;
    export_cmd->add_option("puzzle", export_puzzle)->required();
    export_cmd->add_option("-o,--out", export_out, "output path (default stdout)");
    add_build_flags(export_cmd, export_flags);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "solve a directory of puzzles");
    std::string bench_dir, bench_csv, bench_table;
    double bench_time_limit = 60;
    int bench_jobs = 1;
    bench_cmd->add_option("dir", bench_dir)->required();
    bench_cmd->add_option("--time-limit", bench_time_limit, "seconds per instance");
    bench_cmd->add_option("--jobs", bench_jobs, "worker threads");
    bench_cmd->add_option("--csv", bench_csv)->required();
    bench_cmd->add_option("--table", bench_table, "write the Markdown summary");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "model size accounting");
    std::string stats_puzzle, stats_convention = "structural";
    bool stats_json_flag = false;
    BuildFlags stats_flags;
    stats_cmd->add_option("puzzle", stats_puzzle)->required();
    stats_cmd->add_option("--convention", stats_convention)
        ->check(CLI::IsMember({"paper", "structural"}));
    stats_cmd->add_flag("--json", stats_json_flag);
    add_build_flags(stats_cmd, stats_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return kExitUsage;
    }

    try {
        if (*solve_cmd)
            return run_solve(solve_puzzle, solve_time_limit, solve_enumerate, solve_lp,
                             solve_stats, solve_json, solve_flags);
        if (*verify_cmd) return run_verify(verify_puzzle, verify_solution, verify_json);
        if (*gen_cmd)
            return run_generate(gen_rows, gen_cols, gen_seed, seed_opt->count() > 0, gen_count,
                                gen_params, gen_out, gen_json, gen_flags);
        if (*export_cmd) {
            Puzzle p = parse_puzzle(read_file(export_puzzle));
            std::string lp = export_lp(build_model(p, export_flags.options()));
            if (export_out.empty())
                std::cout << lp;
            else
                write_file(export_out, lp);
            return 0;
        }
        if (*bench_cmd)
            return run_bench(bench_dir, bench_time_limit, bench_jobs, bench_csv, bench_table);
        if (*stats_cmd) {
            Puzzle p = parse_puzzle(read_file(stats_puzzle));
            ModelStats st = stats(build_model(p, stats_flags.options()),
                                  stats_convention == "paper" ? StatsConvention::Paper
                                                              : StatsConvention::Structural);
            if (stats_json_flag)
                std::cout << model_stats_json(st).dump() << "\n";
            else
                std::cout << format_stats(st);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
