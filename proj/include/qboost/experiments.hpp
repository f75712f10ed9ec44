#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qboost/boosting.hpp"
#include "qboost/datasets.hpp"
#include "qboost/forest.hpp"
#include "qboost/logistic.hpp"
#include "qboost/metrics.hpp"

namespace qboost {

std::uint64_t dataset_hash(const LabeledDataset& ds);

// JSON-configurable oracle description shared by the experiment configs.
struct OracleSpec {
    std::string kind = "sa"; // brute | sa | hw
    SolverConfig solver;
    int chimera_m = 8;
    int chimera_defects = 0;
    std::uint64_t chimera_seed = 1;
    IceModel ice;
    std::vector<double> chain_strength_grid{0.5, 1.0, 2.0, 4.0};
    bool sweep_chain_strength = true;
    double fixed_chain_strength = 1.0;
};

BoostOracle make_oracle(const OracleSpec& spec);

struct NamesConfig {
    std::uint64_t seed = 42;
    int k_folds = 10;
    std::string male_file, female_file; // empty: synthetic corpus
    std::size_t synthetic_male = 2943, synthetic_female = 5001;
    int Q = 20;
    std::vector<double> lambda_grid{0.0, 0.05, 0.1};
    int max_outer_iterations = 6;
    double inner_train_fraction = 0.75; // qboost train/validation split
    int rqboost_resamples = 30;
    int forest_trees = 500;
    OracleSpec oracle;
    std::string out_dir = "out/names";
};

struct NamesResult {
    std::vector<double> forest_auc, qboost_auc, rqboost_auc; // one per fold
    Summary forest_summary, qboost_summary, rqboost_summary;
    std::vector<std::string> outputs;
};

NamesResult run_names(const NamesConfig& cfg);

struct LinsepConfig {
    std::uint64_t seed = 42;
    int Q = 13;
    // the loss is unnormalized, so sweeping regularization meaningfully means
    // lambda on the scale of the linear coefficients
    std::vector<double> lambda_grid{0.0, 2.5, 5.0, 10.0};
    std::vector<double> alpha_grid{0.5, 1.0, 2.0, 4.0};
    // the pool fits one batch, so a cell is a single anneal-and-read of the
    // full loss, which is how the separability test is meant to probe it
    int max_outer_iterations = 1;
    double inner_train_fraction = 0.7;
    int chimera_m = 8;
    IceModel ice;         // noise and coefficient truncation both on by default
    SolverConfig solver;  // modest read budget, as on shared hardware
    std::vector<double> logistic_lambda_grid{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    std::string out_dir = "out/linsep";
};

struct LinsepQBoostCell {
    double lambda = 0.0;
    double chain_strength = 0.0;
    double validation_error = 0.0;
    double accuracy = 0.0; // over the full 1000 rows
    bool bait_included = false;
    ConfusionMatrix cm;
    std::vector<std::string> members;
};

struct LinsepLogisticCell {
    Penalty penalty = Penalty::l2;
    double lambda = 0.0;
    double accuracy = 0.0;
    int nonzero_weights = 0;
};

struct LinsepResult {
    std::vector<LinsepQBoostCell> qboost_cells;
    std::size_t selected_cell = 0; // lowest validation error
    std::vector<LinsepLogisticCell> logistic_cells;
    bool l2_reaches_perfect = false;
    bool l1_reaches_perfect = false;
    std::uint64_t dataset_hash = 0;
    std::vector<std::string> outputs;
};

LinsepResult run_linsep(const LinsepConfig& cfg);

struct SeizureConfig {
    std::uint64_t seed = 42;
    int clips_per_class = 24;
    int channels = 8;
    double seconds = 10.0;
    double sample_rate = 400.0;
    EegGenParams gen;
    FeatureConfig features; // windows filled with sensible defaults when empty
    int k_folds = 4;
    int Q = 16;
    std::vector<double> lambda_grid{0.0, 0.05};
    int max_outer_iterations = 4;
    double inner_train_fraction = 0.75;
    int rqboost_resamples = 8;
    int forest_trees = 200;
    double logistic_lambda = 1e-2;
    OracleSpec oracle = [] {
        OracleSpec spec; // the stump pool is large; keep per-batch solves quick
        spec.solver.num_reads = 16;
        spec.solver.sweeps_per_read = 128;
        return spec;
    }();
    std::string out_dir = "out/seizure";
};

struct SeizureResult {
    std::map<std::string, std::vector<double>> auc_by_technique;
    std::size_t feature_dim = 0;
    std::vector<std::string> outputs;
};

SeizureResult run_seizure(const SeizureConfig& cfg);

// JSON round trips for the CLI config file.
NamesConfig names_config_from_json(const std::string& text);
LinsepConfig linsep_config_from_json(const std::string& text);
SeizureConfig seizure_config_from_json(const std::string& text);
std::string config_echo_json(const NamesConfig& cfg);
std::string config_echo_json(const LinsepConfig& cfg);
std::string config_echo_json(const SeizureConfig& cfg);

SolverConfig solver_config_from_json(const std::string& text);
IceModel ice_model_from_json(const std::string& text);

} // namespace qboost
