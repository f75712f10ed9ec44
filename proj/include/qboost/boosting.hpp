#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qboost/datasets.hpp"
#include "qboost/embedding.hpp"
#include "qboost/qubo.hpp"
#include "qboost/solvers.hpp"
#include "qboost/weak.hpp"

namespace qboost {

enum class OracleKind { brute_force, simulated_annealing, hardware_model };

// Optimization oracle for the per-batch QUBOs. The hardware-model kind embeds
// each problem into a Chimera graph (cached per problem size), applies the
// ICE pipeline and either sweeps chain strengths or uses a fixed one.
struct BoostOracle {
    OracleKind kind = OracleKind::simulated_annealing;
    SolverConfig solver;

    std::shared_ptr<const ChimeraGraph> graph;
    IceModel ice;
    std::vector<double> chain_strength_grid{0.5, 1.0, 2.0, 4.0};
    bool sweep_chain_strength = true;
    double fixed_chain_strength = 1.0;
    double break_threshold = 0.05;
    std::uint64_t embed_seed = 7;
    int embed_max_tries = 8;

    SampleSet solve_qubo(const QuboProblem& q, std::uint64_t seed) const;

    // Complete-graph embedding for n logical variables. A single master
    // embedding is grown on first use and sliced for smaller batches; warm it
    // before sharing one oracle across threads.
    Embedding embedding_for(std::size_t n) const;

private:
    mutable std::optional<Embedding> master_emb_;
    mutable std::size_t master_size_ = 0;
};

struct QBoostConfig {
    int Q = 20;
    std::vector<double> lambda_grid{0.0, 0.05, 0.1};
    int max_outer_iterations = 8;
    BoostOracle oracle;
    TiePolicy tie_policy = TiePolicy::fixed_positive;

    void validate() const;
};

struct RQBoostConfig {
    int resamples = 30;
    double train_fraction = 0.6;
    double validation_fraction = 0.2;
    double holdout_fraction = 0.2;
    QBoostConfig inner;
    std::uint64_t seed = 0;

    void validate() const;
};

struct OracleCall {
    int pass = 0;
    int batch_index = 0;
    double lambda = 0.0;
    std::vector<std::string> batch_ids;
    std::vector<std::uint8_t> chosen_w;
    double best_energy = 0.0;
    double validation_error = 0.0;
    bool accepted = false;
};

struct QBoostTrace {
    std::vector<OracleCall> calls;
    std::vector<double> accepted_validation_errors; // strictly decreasing
    bool used_fallback_member = false;
};

std::string trace_to_json(const QBoostTrace& trace);

// residuals of the current strong classifier: yhat_s = y_s - kappa *
// sum_t F_t(x_s) with kappa = 1 / (T_out + Q).
std::vector<double> residuals(const LabeledDataset& train, const StrongClassifier& strong, int Q);

struct BoostQubo {
    QuboProblem qubo;  // qubo.offset stays 0
    double offset = 0; // energy(qubo, w) + offset reproduces the boosting loss
};

// Quadratic expansion of the boosting loss
//   H(w) = 1/2 sum_s [kappa sum_j w_j F_j(x_s) - yhat_s]^2 + lambda sum_j w_j
// over w in {0,1}^batch, using w_j^2 = w_j and F_j^2 = 1.
BoostQubo build_qboost_qubo(const std::vector<WeakClassifier>& batch, const LabeledDataset& train,
                            const std::vector<double>& yhat, double kappa, double lambda);

struct QBoostResult {
    StrongClassifier strong;
    QBoostTrace trace;
};

QBoostResult qboost_train(const std::vector<WeakClassifier>& pool, const LabeledDataset& train,
                          const LabeledDataset& validation, const QBoostConfig& cfg,
                          std::uint64_t seed);

int predict(const StrongClassifier& strong, const LabeledDataset& ds, std::size_t row);
double vote_score(const StrongClassifier& strong, const LabeledDataset& ds, std::size_t row);
double classification_error(const StrongClassifier& strong, const LabeledDataset& ds);

// One strong classifier per resample.
struct ProbabilityModel {
    std::vector<StrongClassifier> ensembles;
    std::vector<QBoostTrace> traces;
};

ProbabilityModel rqboost_train(const std::vector<WeakClassifier>& pool, const LabeledDataset& data,
                               const RQBoostConfig& cfg);

// p(+1) = mean over resamples of the fraction of members voting +1.
double rqboost_predict_proba(const ProbabilityModel& model, const LabeledDataset& ds,
                             std::size_t row);

std::string model_to_json(const ProbabilityModel& model);

namespace serial {
ProbabilityModel rqboost_train(const std::vector<WeakClassifier>& pool, const LabeledDataset& data,
                               const RQBoostConfig& cfg);
} // namespace serial

} // namespace qboost
