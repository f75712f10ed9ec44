#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qboost/experiments.hpp"

using namespace qboost;
namespace fs = std::filesystem;

namespace {
std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string tmp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "qboost_exp" / name;
    fs::remove_all(dir);
    return dir.string();
}

NamesConfig small_names(const std::string& out) {
    NamesConfig cfg;
    cfg.seed = 11;
    cfg.k_folds = 2;
    cfg.synthetic_male = 300;
    cfg.synthetic_female = 500;
    cfg.rqboost_resamples = 3;
    cfg.forest_trees = 25;
    cfg.max_outer_iterations = 2;
    cfg.oracle.solver.num_reads = 8;
    cfg.oracle.solver.sweeps_per_read = 64;
    cfg.out_dir = out;
    return cfg;
}
} // namespace

TEST_CASE("names smoke run emits per-fold rows, a summary, and a manifest") {
    const std::string out = tmp_dir("names");
    const NamesResult res = run_names(small_names(out));
    CHECK(res.forest_auc.size() == 2);
    CHECK(res.qboost_auc.size() == 2);
    CHECK(res.rqboost_auc.size() == 2);
    CHECK(fs::exists(out + "/names_auc.csv"));
    CHECK(fs::exists(out + "/names_summary.csv"));
    CHECK(fs::exists(out + "/manifest.json"));
    const std::string csv = slurp(out + "/names_auc.csv");
    CHECK(csv.starts_with("technique,fold,auc\n"));
    // 3 techniques x 2 folds + header
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("names run is byte-for-byte reproducible under a fixed seed") {
    const std::string out1 = tmp_dir("names_rep1");
    const std::string out2 = tmp_dir("names_rep2");
    run_names(small_names(out1));
    run_names(small_names(out2));
    CHECK(slurp(out1 + "/names_auc.csv") == slurp(out2 + "/names_auc.csv"));
    CHECK(slurp(out1 + "/names_summary.csv") == slurp(out2 + "/names_summary.csv"));
}

TEST_CASE("linsep run reports the bait and reproduces the dataset hash") {
    LinsepConfig cfg;
    cfg.seed = 13;
    cfg.out_dir = tmp_dir("linsep");
    const LinsepResult a = run_linsep(cfg);
    CHECK(a.qboost_cells.size() == cfg.lambda_grid.size() * cfg.alpha_grid.size());
    CHECK(a.l2_reaches_perfect);
    CHECK(a.l1_reaches_perfect);
    CHECK(a.qboost_cells[a.selected_cell].bait_included);
    CHECK(a.qboost_cells[a.selected_cell].accuracy < 1.0);
    for (const auto& cell : a.qboost_cells) CHECK(cell.cm.total() == 1000);
    CHECK(fs::exists(cfg.out_dir + "/linsep_qboost_grid.csv"));
    CHECK(fs::exists(cfg.out_dir + "/linsep_logistic.csv"));
    CHECK(fs::exists(cfg.out_dir + "/linsep_selected.json"));

    cfg.out_dir = tmp_dir("linsep2");
    const LinsepResult b = run_linsep(cfg);
    CHECK(a.dataset_hash == b.dataset_hash);
    CHECK(a.selected_cell == b.selected_cell);
}

TEST_CASE("seizure smoke run is deterministic and writes its artifacts") {
    SeizureConfig cfg;
    cfg.seed = 17;
    cfg.clips_per_class = 8;
    cfg.channels = 4;
    cfg.seconds = 2.0;
    cfg.sample_rate = 200.0;
    cfg.k_folds = 2;
    cfg.rqboost_resamples = 2;
    cfg.forest_trees = 20;
    cfg.Q = 8;
    cfg.max_outer_iterations = 2;
    cfg.oracle.solver.num_reads = 8;
    cfg.oracle.solver.sweeps_per_read = 64;
    cfg.out_dir = tmp_dir("seizure1");
    const SeizureResult a = run_seizure(cfg);
    CHECK(a.auc_by_technique.size() == 4);
    for (const auto& [technique, values] : a.auc_by_technique) CHECK(values.size() == 2);
    // channels x windows x stats + lower triangle
    CHECK(a.feature_dim == 4 * 4 * 11 + 6);
    const std::string csv1 = slurp(cfg.out_dir + "/seizure_auc.csv");

    cfg.out_dir = tmp_dir("seizure2");
    run_seizure(cfg);
    CHECK(csv1 == slurp(cfg.out_dir + "/seizure_auc.csv"));
}

TEST_CASE("experiment configs round trip through JSON") {
    NamesConfig names;
    names.seed = 99;
    names.Q = 15;
    names.oracle.kind = "hw";
    names.oracle.chimera_m = 6;
    const NamesConfig back = names_config_from_json(config_echo_json(names));
    CHECK(back.seed == 99);
    CHECK(back.Q == 15);
    CHECK(back.oracle.kind == "hw");
    CHECK(back.oracle.chimera_m == 6);

    LinsepConfig linsep;
    linsep.alpha_grid = {1.0, 3.0};
    linsep.ice.quantization_step_fraction = 0.25;
    const LinsepConfig lback = linsep_config_from_json(config_echo_json(linsep));
    CHECK(lback.alpha_grid == std::vector<double>{1.0, 3.0});
    REQUIRE(lback.ice.quantization_step_fraction.has_value());
    CHECK(*lback.ice.quantization_step_fraction == 0.25);

    SeizureConfig seizure;
    seizure.clips_per_class = 5;
    const SeizureConfig sback = seizure_config_from_json(config_echo_json(seizure));
    CHECK(sback.clips_per_class == 5);
}

TEST_CASE("manifest echoes the configuration and lists outputs") {
    const std::string out = tmp_dir("manifest");
    NamesConfig cfg = small_names(out);
    run_names(cfg);
    const std::string manifest = slurp(out + "/manifest.json");
    CHECK(manifest.find("\"experiment\": \"names\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 11") != std::string::npos);
    CHECK(manifest.find("names_summary.csv") != std::string::npos);
}
