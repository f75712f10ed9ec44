#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qboost/experiments.hpp"

namespace fs = std::filesystem;
using namespace qboost;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// resolve relative output dirs under QBOOST_OUT_ROOT when set
std::string resolve_out(const std::string& dir) {
    if (fs::path(dir).is_absolute()) return dir;
    const char* root = std::getenv("QBOOST_OUT_ROOT");
    if (!root || !*root) return dir;
    return (fs::path(root) / dir).string();
}

struct CommonFlags {
    std::string config_file;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string oracle_kind;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_file, "experiment config JSON file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option_function<std::uint64_t>(
           "--seed", [&flags](std::uint64_t s) { flags.seed = s; flags.seed_set = true; },
           "master seed");
    cmd->add_option("--oracle", flags.oracle_kind, "oracle kind: brute | sa | hw")
        ->check(CLI::IsMember({"brute", "sa", "hw"}));
}

ChimeraGraph load_graph(const std::string& graph_file, int m, int defects, std::uint64_t gseed) {
    if (!graph_file.empty()) return chimera_from_json(slurp(graph_file));
    if (defects > 0) return build_chimera_random_defects(m, defects, gseed);
    return build_chimera(m);
}

int run_embed(const std::string& graph_file, int m, int defects, std::uint64_t gseed,
              bool clique, int heuristic_n, const std::string& problem_file, std::uint64_t seed,
              int tries, const std::string& out_file) {
    const ChimeraGraph graph = load_graph(graph_file, m, defects, gseed);
    Embedding emb;
    if (clique) {
        emb = clique_embed(graph);
    } else {
        ProblemGraph pg;
        if (!problem_file.empty())
            pg = ProblemGraph::from_qubo(qubo_from_json(slurp(problem_file)));
        else if (heuristic_n > 0)
            pg = ProblemGraph::complete(static_cast<std::size_t>(heuristic_n));
        else
            throw std::runtime_error("--heuristic needs --problem or --complete");
        auto found = heuristic_embed(pg, graph, seed, tries);
        if (!found) {
            std::cerr << "no embedding found after " << tries << " tries\n";
            return 2;
        }
        emb = std::move(*found);
    }
    const std::string text = embedding_to_json(emb);
    if (out_file.empty())
        std::cout << text << "\n";
    else {
        std::ofstream out(out_file);
        out << text << "\n";
    }
    std::cerr << "chains: " << emb.num_chains() << ", qubits: " << emb.total_qubits()
              << ", longest chain: " << emb.max_chain_length() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QBoost/RQBoost annealer-emulation toolkit"};
    app.require_subcommand(1);

    CommonFlags names_flags, linsep_flags, seizure_flags;

    auto* names_cmd = app.add_subcommand("names", "name-classification experiment (10-fold CV)");
    std::string male_file, female_file;
    int names_folds = 0;
    add_common(names_cmd, names_flags);
    names_cmd->add_option("--male-file", male_file, "male names, one per line");
    names_cmd->add_option("--female-file", female_file, "female names, one per line");
    names_cmd->add_option("--folds", names_folds, "cross-validation folds");

    auto* linsep_cmd = app.add_subcommand("linsep", "linearly separable matrix experiment");
    add_common(linsep_cmd, linsep_flags);

    auto* seizure_cmd = app.add_subcommand("seizure", "synthetic EEG pipeline experiment");
    add_common(seizure_cmd, seizure_flags);

    auto* solve_cmd = app.add_subcommand("solve", "solve a QUBO problem file");
    std::string solve_problem, solve_solver_file, solve_out;
    std::uint64_t solve_seed = 0;
    std::string solve_kind = "sa";
    std::uint32_t solve_reads = 64, solve_sweeps = 512;
    solve_cmd->add_option("--problem", solve_problem, "QUBO JSON file")->required();
    solve_cmd->add_option("--solver-config", solve_solver_file, "solver config JSON file");
    solve_cmd->add_option("--oracle", solve_kind, "brute | sa")
        ->check(CLI::IsMember({"brute", "sa"}));
    solve_cmd->add_option("--reads", solve_reads, "annealing reads");
    solve_cmd->add_option("--sweeps", solve_sweeps, "sweeps per read");
    solve_cmd->add_option("--seed", solve_seed, "solver seed");
    solve_cmd->add_option("--out", solve_out, "write the sample set here instead of stdout");

    auto* embed_cmd = app.add_subcommand("embed", "construct or check minor embeddings");
    std::string embed_graph_file, embed_problem_file, embed_out;
    int embed_m = 8, embed_defects = 0, embed_complete = 0, embed_tries = 10;
    std::uint64_t embed_seed = 0, embed_gseed = 1;
    bool embed_clique = false, embed_heuristic = false;
    embed_cmd->add_option("--graph", embed_graph_file, "Chimera graph JSON file");
    embed_cmd->add_option("--m", embed_m, "grid size for a generated graph");
    embed_cmd->add_option("--defects", embed_defects, "random defective qubits");
    embed_cmd->add_option("--graph-seed", embed_gseed, "seed for random defects");
    embed_cmd->add_flag("--clique", embed_clique, "deterministic clique embedding");
    embed_cmd->add_flag("--heuristic", embed_heuristic, "randomized chain-growth search");
    embed_cmd->add_option("--complete", embed_complete, "embed a complete graph of this size");
    embed_cmd->add_option("--problem", embed_problem_file, "embed this QUBO's interaction graph");
    embed_cmd->add_option("--seed", embed_seed, "search seed");
    embed_cmd->add_option("--tries", embed_tries, "restarts before giving up");
    embed_cmd->add_option("--out", embed_out, "write the embedding here instead of stdout");

    auto* verify_cmd = embed_cmd->add_subcommand("verify", "check an embedding file");
    verify_cmd->fallthrough();
    std::string verify_embedding_file, verify_problem_file;
    verify_cmd->add_option("--embedding", verify_embedding_file, "embedding JSON")->required();
    verify_cmd->add_option("--problem", verify_problem_file, "QUBO JSON (interaction graph)");

    auto* sweep_cmd = embed_cmd->add_subcommand("sweep", "chain strength sweep");
    sweep_cmd->fallthrough();
    std::string sweep_embedding_file, sweep_problem_file, sweep_grid = "0.5,1,2,4", sweep_ice_file;
    std::uint64_t sweep_seed = 0;
    sweep_cmd->add_option("--embedding", sweep_embedding_file, "embedding JSON")->required();
    sweep_cmd->add_option("--problem", sweep_problem_file, "QUBO JSON")->required();
    sweep_cmd->add_option("--grid", sweep_grid, "comma-separated chain strengths");
    sweep_cmd->add_option("--ice", sweep_ice_file, "ICE model JSON");
    sweep_cmd->add_option("--seed", sweep_seed, "solver seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*names_cmd) {
            NamesConfig cfg;
            if (!names_flags.config_file.empty())
                cfg = names_config_from_json(slurp(names_flags.config_file));
            if (names_flags.seed_set) cfg.seed = names_flags.seed;
            if (!names_flags.oracle_kind.empty()) cfg.oracle.kind = names_flags.oracle_kind;
            if (!names_flags.out_dir.empty()) cfg.out_dir = names_flags.out_dir;
            if (!male_file.empty()) cfg.male_file = male_file;
            if (!female_file.empty()) cfg.female_file = female_file;
            if (names_folds > 0) cfg.k_folds = names_folds;
            cfg.out_dir = resolve_out(cfg.out_dir);
            const NamesResult res = run_names(cfg);
            std::cout << "technique,mean_auc\n"
                      << "random_forest," << res.forest_summary.mean << "\n"
                      << "qboost," << res.qboost_summary.mean << "\n"
                      << "rqboost," << res.rqboost_summary.mean << "\n";
            std::cerr << "outputs in " << cfg.out_dir << "\n";
            return 0;
        }
        if (*linsep_cmd) {
            LinsepConfig cfg;
            if (!linsep_flags.config_file.empty())
                cfg = linsep_config_from_json(slurp(linsep_flags.config_file));
            if (linsep_flags.seed_set) cfg.seed = linsep_flags.seed;
            if (!linsep_flags.out_dir.empty()) cfg.out_dir = linsep_flags.out_dir;
            cfg.out_dir = resolve_out(cfg.out_dir);
            const LinsepResult res = run_linsep(cfg);
            const auto& sel = res.qboost_cells[res.selected_cell];
            std::cout << "selected lambda=" << sel.lambda << " chain_strength=" << sel.chain_strength
                      << " accuracy=" << sel.accuracy << " bait_included=" << sel.bait_included
                      << "\n"
                      << "logistic perfect separation: l2=" << res.l2_reaches_perfect
                      << " l1=" << res.l1_reaches_perfect << "\n";
            std::cerr << "outputs in " << cfg.out_dir << "\n";
            return 0;
        }
        if (*seizure_cmd) {
            SeizureConfig cfg;
            if (!seizure_flags.config_file.empty())
                cfg = seizure_config_from_json(slurp(seizure_flags.config_file));
            if (seizure_flags.seed_set) cfg.seed = seizure_flags.seed;
            if (!seizure_flags.oracle_kind.empty()) cfg.oracle.kind = seizure_flags.oracle_kind;
            if (!seizure_flags.out_dir.empty()) cfg.out_dir = seizure_flags.out_dir;
            cfg.out_dir = resolve_out(cfg.out_dir);
            const SeizureResult res = run_seizure(cfg);
            std::cout << "technique,mean_auc\n";
            for (const auto& [technique, values] : res.auc_by_technique)
                std::cout << technique << "," << summarize(values).mean << "\n";
            std::cerr << "outputs in " << cfg.out_dir << "\n";
            return 0;
        }
        if (*solve_cmd) {
            const QuboProblem q = qubo_from_json(slurp(solve_problem));
            SolverConfig cfg;
            if (!solve_solver_file.empty()) cfg = solver_config_from_json(slurp(solve_solver_file));
            if (solve_cmd->count("--oracle"))
                cfg.kind = solve_kind == "brute" ? SolverKind::brute_force
                                                 : SolverKind::simulated_annealing;
            if (solve_cmd->count("--reads")) cfg.num_reads = solve_reads;
            if (solve_cmd->count("--sweeps")) cfg.sweeps_per_read = solve_sweeps;
            if (solve_cmd->count("--seed")) cfg.seed = solve_seed;
            const SampleSet samples = solve(q, cfg);
            const std::string text = sampleset_to_json(samples);
            if (solve_out.empty())
                std::cout << text << "\n";
            else {
                std::ofstream out(solve_out);
                out << text << "\n";
            }
            std::cerr << "best energy " << samples.best().energy << "\n";
            return 0;
        }
        if (*embed_cmd) {
            if (*verify_cmd) {
                const ChimeraGraph graph =
                    load_graph(embed_graph_file, embed_m, embed_defects, embed_gseed);
                const Embedding emb = embedding_from_json(slurp(verify_embedding_file));
                ProblemGraph pg;
                if (!verify_problem_file.empty())
                    pg = ProblemGraph::from_qubo(qubo_from_json(slurp(verify_problem_file)));
                else
                    pg = ProblemGraph::complete(emb.num_chains());
                const VerifyReport report = verify_embedding(pg, graph, emb);
                std::cout << report.to_string() << "\n";
                return report.ok ? 0 : 1;
            }
            if (*sweep_cmd) {
                const ChimeraGraph graph =
                    load_graph(embed_graph_file, embed_m, embed_defects, embed_gseed);
                const Embedding emb = embedding_from_json(slurp(sweep_embedding_file));
                const QuboProblem q = qubo_from_json(slurp(sweep_problem_file));
                IceModel ice;
                if (!sweep_ice_file.empty()) ice = ice_model_from_json(slurp(sweep_ice_file));
                std::vector<double> grid;
                std::stringstream ss(sweep_grid);
                for (std::string tok; std::getline(ss, tok, ',');) grid.push_back(std::stod(tok));
                SolverConfig cfg;
                cfg.seed = sweep_seed;
                const SweepResult res = chain_strength_sweep(q, graph, emb, grid, ice, cfg);
                nlohmann::json out;
                out["selected_chain_strength"] =
                    res.chain_strength ? nlohmann::json(*res.chain_strength) : nlohmann::json();
                out["diagnostics"] = nlohmann::json::array();
                for (const auto& p : res.diagnostics)
                    out["diagnostics"].push_back({{"chain_strength", p.chain_strength},
                                                  {"best_energy", p.best_energy},
                                                  {"break_fraction", p.best_break_fraction},
                                                  {"qualified", p.qualified}});
                std::cout << out.dump(2) << "\n";
                return res.chain_strength ? 0 : 3;
            }
            return run_embed(embed_graph_file, embed_m, embed_defects, embed_gseed, embed_clique,
                             embed_complete, embed_problem_file, embed_seed, embed_tries,
                             embed_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
