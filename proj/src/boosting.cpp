#include "qboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "qboost/rng.hpp"

namespace qboost {

void QBoostConfig::validate() const {
    if (Q < 1) throw std::invalid_argument("Q must be >= 1");
    if (lambda_grid.empty()) throw std::invalid_argument("lambda grid must be nonempty");
    for (double l : lambda_grid)
        if (l < 0.0) throw std::invalid_argument("lambda values must be >= 0");
    if (max_outer_iterations < 1) throw std::invalid_argument("max_outer_iterations must be >= 1");
}

void RQBoostConfig::validate() const {
    if (resamples < 1) throw std::invalid_argument("resamples must be >= 1");
    if (!(train_fraction > 0.0 && validation_fraction > 0.0 && holdout_fraction > 0.0))
        throw std::invalid_argument("split fractions must be positive");
    if (std::abs(train_fraction + validation_fraction + holdout_fraction - 1.0) > 1e-9)
        throw std::invalid_argument("split fractions must sum to 1");
    inner.validate();
}

Embedding BoostOracle::embedding_for(std::size_t n) const {
    if (!graph) throw std::runtime_error("hardware-model oracle has no Chimera graph configured");
    if (n == 0) throw std::invalid_argument("embedding_for: zero variables");
    if (!master_emb_ || master_size_ < n) {
        if (graph->perfect() && n <= static_cast<std::size_t>(4 * graph->m() + 1)) {
            master_emb_ = clique_embed(*graph);
            master_size_ = static_cast<std::size_t>(4 * graph->m() + 1);
        } else {
            auto emb = heuristic_embed(ProblemGraph::complete(n), *graph, embed_seed, embed_max_tries);
            if (!emb)
                throw std::runtime_error("no embedding found for a fully connected problem of size " +
                                         std::to_string(n));
            master_emb_ = std::move(*emb);
            master_size_ = n;
        }
    }
    // a prefix of a clique embedding is a clique embedding of the prefix
    Embedding sliced;
    sliced.chains.assign(master_emb_->chains.begin(),
                         master_emb_->chains.begin() + static_cast<std::ptrdiff_t>(n));
    return sliced;
}

namespace {

// Boosting QUBOs scale with the training set size; normalize so the default
// temperature schedule matches, then restore exact energies.
SampleSet anneal_normalized(const QuboProblem& q, const SolverConfig& cfg) {
    double max_abs = 0.0;
    for (const auto& [i, v] : q.linear) max_abs = std::max(max_abs, std::abs(v));
    for (const auto& [key, v] : q.quadratic) max_abs = std::max(max_abs, std::abs(v));
    if (max_abs == 0.0 || max_abs == 1.0) return simulated_anneal(q, cfg);
    QuboProblem scaled = q;
    for (auto& [i, v] : scaled.linear) v /= max_abs;
    for (auto& [key, v] : scaled.quadratic) v /= max_abs;
    scaled.offset = 0.0;
    SampleSet out = simulated_anneal(scaled, cfg);
    for (auto& s : out.samples) s.energy = energy(q, s.assignment);
    return out;
}

} // namespace

SampleSet BoostOracle::solve_qubo(const QuboProblem& q, std::uint64_t seed) const {
    SolverConfig cfg = solver;
    cfg.seed = seed;
    switch (kind) {
        case OracleKind::brute_force:
            return brute_force_solve(q);
        case OracleKind::simulated_annealing:
            return anneal_normalized(q, cfg);
        case OracleKind::hardware_model: {
            const Embedding emb = embedding_for(q.num_vars);
            if (!sweep_chain_strength)
                return solve_hardware_model(q, *graph, emb, fixed_chain_strength, ice, cfg).logical;
            SweepResult sweep =
                chain_strength_sweep(q, *graph, emb, chain_strength_grid, ice, cfg, break_threshold);
            if (sweep.chain_strength) return std::move(sweep.best.logical);
            // sweep exhausted: fall back to the grid point with the fewest breaks
            std::size_t pick = 0;
            for (std::size_t i = 1; i < sweep.diagnostics.size(); ++i)
                if (sweep.diagnostics[i].best_break_fraction <
                    sweep.diagnostics[pick].best_break_fraction)
                    pick = i;
            SolverConfig point_cfg = cfg;
            point_cfg.seed = mix_seed(cfg.seed, pick);
            return solve_hardware_model(q, *graph, emb, chain_strength_grid[pick], ice, point_cfg)
                .logical;
        }
    }
    throw std::logic_error("unreachable oracle kind");
}

std::vector<double> residuals(const LabeledDataset& train, const StrongClassifier& strong, int Q) {
    if (Q < 1) throw std::invalid_argument("Q must be >= 1");
    const double kappa = 1.0 / (static_cast<double>(strong.members.size()) + Q);
    std::vector<double> out(train.num_rows());
    for (std::size_t s = 0; s < train.num_rows(); ++s) {
        double vote = 0.0;
        for (const auto& member : strong.members) vote += evaluate_weak(member, train, s);
        out[s] = train.labels[s] - kappa * vote;
    }
    return out;
}

BoostQubo build_qboost_qubo(const std::vector<WeakClassifier>& batch, const LabeledDataset& train,
                            const std::vector<double>& yhat, double kappa, double lambda) {
    if (batch.empty()) throw std::invalid_argument("build_qboost_qubo: empty batch");
    if (yhat.size() != train.num_rows())
        throw std::invalid_argument("residual vector length does not match training rows");
    const std::size_t qn = batch.size();
    const std::size_t S = train.num_rows();

    std::vector<std::vector<std::int8_t>> preds(qn, std::vector<std::int8_t>(S));
    for (std::size_t j = 0; j < qn; ++j)
        for (std::size_t s = 0; s < S; ++s)
            preds[j][s] = static_cast<std::int8_t>(evaluate_weak(batch[j], train, s));

    BoostQubo out;
    out.qubo.num_vars = qn;
    const double k2 = kappa * kappa;
    for (std::size_t j = 0; j < qn; ++j) {
        double corr = 0.0;
        for (std::size_t s = 0; s < S; ++s) corr += yhat[s] * preds[j][s];
        out.qubo.set_linear(static_cast<VarIndex>(j),
                            0.5 * k2 * static_cast<double>(S) - kappa * corr + lambda);
    }
    for (std::size_t j = 0; j < qn; ++j)
        for (std::size_t k = j + 1; k < qn; ++k) {
            long agree = 0;
            for (std::size_t s = 0; s < S; ++s) agree += preds[j][s] * preds[k][s];
            out.qubo.set_quadratic(static_cast<VarIndex>(j), static_cast<VarIndex>(k),
                                   k2 * static_cast<double>(agree));
        }
    for (double r : yhat) out.offset += 0.5 * r * r;
    return out;
}

namespace {

int vote_to_label(double vote, TiePolicy policy, std::uint64_t tie_seed, std::size_t row) {
    if (vote > 0.0) return 1;
    if (vote < 0.0) return -1;
    if (policy == TiePolicy::fixed_positive) return 1;
    return seeded_coin(tie_seed, row) ? 1 : -1;
}

// prediction table: pool member x row
std::vector<std::vector<std::int8_t>> prediction_table(const std::vector<WeakClassifier>& pool,
                                                       const LabeledDataset& ds) {
    std::vector<std::vector<std::int8_t>> table(pool.size(), std::vector<std::int8_t>(ds.num_rows()));
    for (std::size_t j = 0; j < pool.size(); ++j)
        for (std::size_t s = 0; s < ds.num_rows(); ++s)
            table[j][s] = static_cast<std::int8_t>(evaluate_weak(pool[j], ds, s));
    return table;
}

double ensemble_error(const std::vector<int>& base_votes, const std::vector<std::size_t>& extra,
                      const std::vector<std::vector<std::int8_t>>& table,
                      const std::vector<int>& labels, TiePolicy policy, std::uint64_t tie_seed) {
    std::size_t wrong = 0;
    for (std::size_t s = 0; s < labels.size(); ++s) {
        int vote = base_votes[s];
        for (std::size_t j : extra) vote += table[j][s];
        if (vote_to_label(vote, policy, tie_seed, s) != labels[s]) ++wrong;
    }
    return labels.empty() ? 0.0 : static_cast<double>(wrong) / static_cast<double>(labels.size());
}

} // namespace

QBoostResult qboost_train(const std::vector<WeakClassifier>& pool, const LabeledDataset& train,
                          const LabeledDataset& validation, const QBoostConfig& cfg,
                          std::uint64_t seed) {
    cfg.validate();
    if (pool.empty()) throw std::invalid_argument("qboost_train: empty pool");
    if (train.num_rows() == 0 || validation.num_rows() == 0)
        throw std::invalid_argument("qboost_train: empty train or validation split");

    const auto train_table = prediction_table(pool, train);
    const auto val_table = prediction_table(pool, validation);

    QBoostResult res;
    res.strong.tie_policy = cfg.tie_policy;
    res.strong.tie_seed = seed;

    std::vector<bool> accepted(pool.size(), false);
    std::vector<int> train_votes(train.num_rows(), 0);
    std::vector<int> val_votes(validation.num_rows(), 0);
    double current_err = std::numeric_limits<double>::infinity();

    for (int pass = 0; pass < cfg.max_outer_iterations; ++pass) {
        const double kappa = 1.0 / (static_cast<double>(res.strong.members.size()) + cfg.Q);
        std::vector<double> resid(train.num_rows());
        for (std::size_t s = 0; s < train.num_rows(); ++s)
            resid[s] = train.labels[s] - kappa * train_votes[s];

        // rank remaining pool members by residual-weighted covariance; the
        // centering keeps a class-prior offset from flooding the top batches
        // with one classifier polarity
        std::vector<std::size_t> ranked;
        for (std::size_t j = 0; j < pool.size(); ++j)
            if (!accepted[j]) ranked.push_back(j);
        if (ranked.empty()) break;
        double resid_sum = 0.0;
        for (double r : resid) resid_sum += r;
        const double inv_rows = 1.0 / static_cast<double>(train.num_rows());
        std::vector<double> agreement(pool.size(), 0.0);
        for (std::size_t j : ranked) {
            double a = 0.0, mean_f = 0.0;
            for (std::size_t s = 0; s < train.num_rows(); ++s) {
                a += resid[s] * train_table[j][s];
                mean_f += train_table[j][s];
            }
            agreement[j] = a - resid_sum * mean_f * inv_rows;
        }
        std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
            if (agreement[a] != agreement[b]) return agreement[a] > agreement[b];
            return a < b;
        });

        struct Best {
            double err = std::numeric_limits<double>::infinity();
            double lambda = -1.0;
            int batch_index = -1;
            std::vector<std::size_t> candidates;
        } best;

        const std::size_t num_batches = (ranked.size() + cfg.Q - 1) / cfg.Q;
        for (std::size_t b = 0; b < num_batches; ++b) {
            std::vector<std::size_t> batch_idx(
                ranked.begin() + static_cast<std::ptrdiff_t>(b * cfg.Q),
                ranked.begin() + static_cast<std::ptrdiff_t>(
                                     std::min(ranked.size(), (b + 1) * cfg.Q)));
            std::vector<WeakClassifier> batch;
            for (std::size_t j : batch_idx) batch.push_back(pool[j]);

            for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li) {
                const double lambda = cfg.lambda_grid[li];
                const BoostQubo bq = build_qboost_qubo(batch, train, resid, kappa, lambda);
                SampleSet samples;
                try {
                    samples = cfg.oracle.solve_qubo(
                        bq.qubo, mix_seed(seed, static_cast<std::uint64_t>(pass),
                                          b * 257 + li + 1));
                } catch (const std::exception& e) {
                    throw std::runtime_error("oracle failed on pass " + std::to_string(pass) +
                                             ", batch " + std::to_string(b) + ", lambda " +
                                             std::to_string(lambda) + ": " + e.what());
                }
                const Assignment& w = samples.best().assignment;
                std::vector<std::size_t> cands;
                for (std::size_t j = 0; j < batch_idx.size(); ++j)
                    if (w[j]) cands.push_back(batch_idx[j]);
                const double err = ensemble_error(val_votes, cands, val_table, validation.labels,
                                                  cfg.tie_policy, seed);

                OracleCall call;
                call.pass = pass;
                call.batch_index = static_cast<int>(b);
                call.lambda = lambda;
                for (std::size_t j : batch_idx) call.batch_ids.push_back(pool[j].id);
                call.chosen_w = w;
                call.best_energy = samples.best().energy;
                call.validation_error = err;
                res.trace.calls.push_back(std::move(call));

                const bool better = err < best.err ||
                                    (err == best.err && lambda > best.lambda);
                if (better && !cands.empty()) {
                    best.err = err;
                    best.lambda = lambda;
                    best.batch_index = static_cast<int>(b);
                    best.candidates = std::move(cands);
                }
            }
        }

        if (best.batch_index >= 0 && best.err < current_err) {
            for (std::size_t j : best.candidates) {
                accepted[j] = true;
                res.strong.members.push_back(pool[j]);
                for (std::size_t s = 0; s < train.num_rows(); ++s) train_votes[s] += train_table[j][s];
                for (std::size_t s = 0; s < validation.num_rows(); ++s) val_votes[s] += val_table[j][s];
            }
            current_err = best.err;
            res.trace.accepted_validation_errors.push_back(best.err);
            for (auto it = res.trace.calls.rbegin(); it != res.trace.calls.rend(); ++it)
                if (it->pass == pass && it->batch_index == best.batch_index &&
                    it->lambda == best.lambda) {
                    it->accepted = true;
                    break;
                }
        } else {
            break; // full pass without improvement
        }
    }

    if (res.strong.members.empty()) {
        // no batch ever improved validation: fall back to the single best member
        std::size_t pick = 0;
        double pick_err = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pool.size(); ++j) {
            const double err = ensemble_error(val_votes, {j}, val_table, validation.labels,
                                              cfg.tie_policy, seed);
            if (err < pick_err) {
                pick_err = err;
                pick = j;
            }
        }
        res.strong.members.push_back(pool[pick]);
        res.trace.used_fallback_member = true;
        res.trace.accepted_validation_errors.push_back(pick_err);
    }
    return res;
}

double vote_score(const StrongClassifier& strong, const LabeledDataset& ds, std::size_t row) {
    if (strong.members.empty()) throw std::runtime_error("strong classifier has no members");
    double vote = 0.0;
    for (const auto& member : strong.members) vote += evaluate_weak(member, ds, row);
    return vote / static_cast<double>(strong.members.size());
}

int predict(const StrongClassifier& strong, const LabeledDataset& ds, std::size_t row) {
    if (strong.members.empty()) throw std::runtime_error("strong classifier has no members");
    double vote = 0.0;
    for (const auto& member : strong.members) vote += evaluate_weak(member, ds, row);
    return vote_to_label(vote, strong.tie_policy, strong.tie_seed, row);
}

double classification_error(const StrongClassifier& strong, const LabeledDataset& ds) {
    std::size_t wrong = 0;
    for (std::size_t s = 0; s < ds.num_rows(); ++s)
        if (predict(strong, ds, s) != ds.labels[s]) ++wrong;
    return ds.num_rows() == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(ds.num_rows());
}

namespace {

ProbabilityModel rqboost_impl(const std::vector<WeakClassifier>& pool, const LabeledDataset& data,
                              const RQBoostConfig& cfg, bool parallel) {
    cfg.validate();
    data.validate();
    const std::size_t n = data.num_rows();
    std::size_t n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * n));
    std::size_t n_val = static_cast<std::size_t>(std::llround(cfg.validation_fraction * n));
    n_train = std::max<std::size_t>(1, std::min(n_train, n - 2));
    n_val = std::max<std::size_t>(1, std::min(n_val, n - n_train - 1));

    // warm the shared embedding cache before fanning out
    if (cfg.inner.oracle.kind == OracleKind::hardware_model)
        cfg.inner.oracle.embedding_for(std::min<std::size_t>(cfg.inner.Q, pool.size()));

    ProbabilityModel model;
    model.ensembles.resize(cfg.resamples);
    model.traces.resize(cfg.resamples);
    std::vector<std::string> failures(cfg.resamples);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t r = 0; r < cfg.resamples; ++r) {
        try {
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::mt19937_64 eng = make_engine(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
            std::shuffle(perm.begin(), perm.end(), eng);

            const std::vector<std::size_t> train_rows(perm.begin(),
                                                      perm.begin() + static_cast<std::ptrdiff_t>(n_train));
            const std::vector<std::size_t> val_rows(
                perm.begin() + static_cast<std::ptrdiff_t>(n_train),
                perm.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
            // rows beyond train+validation form the holdout partition; training
            // never touches them

            QBoostResult qr = qboost_train(pool, data.subset(train_rows), data.subset(val_rows),
                                           cfg.inner, mix_seed(cfg.seed, static_cast<std::uint64_t>(r), 1));
            model.ensembles[r] = std::move(qr.strong);
            model.traces[r] = std::move(qr.trace);
        } catch (const std::exception& e) {
            failures[r] = e.what();
        }
    }
    for (std::size_t r = 0; r < failures.size(); ++r)
        if (!failures[r].empty())
            throw std::runtime_error("rqboost resample " + std::to_string(r) + " failed: " + failures[r]);
    return model;
}

} // namespace

ProbabilityModel rqboost_train(const std::vector<WeakClassifier>& pool, const LabeledDataset& data,
                               const RQBoostConfig& cfg) {
    return rqboost_impl(pool, data, cfg, true);
}

namespace serial {
ProbabilityModel rqboost_train(const std::vector<WeakClassifier>& pool, const LabeledDataset& data,
                               const RQBoostConfig& cfg) {
    return rqboost_impl(pool, data, cfg, false);
}
} // namespace serial

double rqboost_predict_proba(const ProbabilityModel& model, const LabeledDataset& ds,
                             std::size_t row) {
    if (model.ensembles.empty()) throw std::runtime_error("empty probability model");
    double acc = 0.0;
    for (const auto& strong : model.ensembles) {
        if (strong.members.empty())
            throw std::runtime_error("probability model contains an empty strong classifier");
        std::size_t plus = 0;
        for (const auto& member : strong.members)
            if (evaluate_weak(member, ds, row) > 0) ++plus;
        acc += static_cast<double>(plus) / static_cast<double>(strong.members.size());
    }
    return acc / static_cast<double>(model.ensembles.size());
}

std::string trace_to_json(const QBoostTrace& trace) {
    nlohmann::json j;
    j["used_fallback_member"] = trace.used_fallback_member;
    j["accepted_validation_errors"] = trace.accepted_validation_errors;
    j["calls"] = nlohmann::json::array();
    for (const auto& c : trace.calls) {
        nlohmann::json call;
        call["pass"] = c.pass;
        call["batch_index"] = c.batch_index;
        call["lambda"] = c.lambda;
        call["batch_ids"] = c.batch_ids;
        std::string bits(c.chosen_w.size(), '0');
        for (std::size_t i = 0; i < c.chosen_w.size(); ++i)
            if (c.chosen_w[i]) bits[i] = '1';
        call["chosen_w"] = bits;
        call["best_energy"] = c.best_energy;
        call["validation_error"] = c.validation_error;
        call["accepted"] = c.accepted;
        j["calls"].push_back(std::move(call));
    }
    return j.dump();
}

std::string model_to_json(const ProbabilityModel& model) {
    nlohmann::json j;
    j["ensembles"] = nlohmann::json::array();
    for (const auto& strong : model.ensembles) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto& m : strong.members) members.push_back(m.id);
        j["ensembles"].push_back(std::move(members));
    }
    return j.dump();
}

} // namespace qboost
