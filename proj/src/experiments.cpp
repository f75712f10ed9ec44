#include "qboost/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qboost/rng.hpp"

namespace fs = std::filesystem;

namespace qboost {

namespace {
constexpr const char* kVersion = "0.1.0";

void fnv(std::uint64_t& h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffULL;
        h *= 0x100000001b3ULL;
    }
}
} // namespace

std::uint64_t dataset_hash(const LabeledDataset& ds) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    fnv(h, ds.num_rows());
    fnv(h, ds.num_features());
    for (int y : ds.labels) fnv(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(y)));
    for (const auto& row : ds.features)
        for (double v : row) fnv(h, std::bit_cast<std::uint64_t>(v));
    for (const auto& name : ds.names)
        for (char c : name) fnv(h, static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return h;
}

BoostOracle make_oracle(const OracleSpec& spec) {
    BoostOracle oracle;
    if (spec.kind == "brute")
        oracle.kind = OracleKind::brute_force;
    else if (spec.kind == "sa")
        oracle.kind = OracleKind::simulated_annealing;
    else if (spec.kind == "hw")
        oracle.kind = OracleKind::hardware_model;
    else
        throw std::invalid_argument("unknown oracle kind '" + spec.kind + "' (brute|sa|hw)");
    oracle.solver = spec.solver;
    oracle.ice = spec.ice;
    oracle.chain_strength_grid = spec.chain_strength_grid;
    oracle.sweep_chain_strength = spec.sweep_chain_strength;
    oracle.fixed_chain_strength = spec.fixed_chain_strength;
    if (oracle.kind == OracleKind::hardware_model) {
        if (spec.chimera_defects > 0)
            oracle.graph = std::make_shared<ChimeraGraph>(
                build_chimera_random_defects(spec.chimera_m, spec.chimera_defects, spec.chimera_seed));
        else
            oracle.graph = std::make_shared<ChimeraGraph>(build_chimera(spec.chimera_m));
    }
    return oracle;
}

namespace {

void ensure_dir(const std::string& dir) { fs::create_directories(dir); }

// written to a temp file first so partially written outputs never appear
void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
    }
    fs::rename(tmp, path);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string summary_csv_row(const std::string& technique, const Summary& s) {
    std::ostringstream os;
    os << technique << "," << fmt(s.min) << "," << fmt(s.q1) << "," << fmt(s.median) << ","
       << fmt(s.mean) << "," << fmt(s.q3) << "," << fmt(s.max) << "," << fmt(s.std_dev) << "\n";
    return os.str();
}

void write_manifest(const std::string& out_dir, const std::string& experiment,
                    std::uint64_t seed, const std::string& config_json,
                    const std::vector<std::string>& outputs,
                    std::optional<std::uint64_t> data_hash = std::nullopt) {
    nlohmann::json j;
    j["experiment"] = experiment;
    j["seed"] = seed;
    j["version"] = kVersion;
    j["config"] = nlohmann::json::parse(config_json);
    j["outputs"] = outputs;
    if (data_hash) j["dataset_hash"] = *data_hash;
    write_file_atomic(out_dir + "/manifest.json", j.dump(2) + "\n");
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_rows(const std::vector<std::size_t>& rows, double first_fraction, std::uint64_t seed) {
    std::vector<std::size_t> shuffled = rows;
    std::mt19937_64 eng = make_engine(seed);
    std::shuffle(shuffled.begin(), shuffled.end(), eng);
    std::size_t n_first = static_cast<std::size_t>(std::llround(first_fraction * shuffled.size()));
    n_first = std::clamp<std::size_t>(n_first, 1, shuffled.size() - 1);
    return {{shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_first)},
            {shuffled.begin() + static_cast<std::ptrdiff_t>(n_first), shuffled.end()}};
}

} // namespace

NamesResult run_names(const NamesConfig& cfg) {
    ensure_dir(cfg.out_dir);
    LabeledDataset ds;
    if (!cfg.male_file.empty() || !cfg.female_file.empty()) {
        if (cfg.male_file.empty() || cfg.female_file.empty())
            throw std::invalid_argument("both male_file and female_file are required");
        ds = load_names(cfg.male_file, cfg.female_file);
    } else {
        ds = gen_names_corpus(cfg.seed, cfg.synthetic_male, cfg.synthetic_female);
    }
    const auto pool = names_weak_pool();
    const LabeledDataset feats = weak_feature_matrix(pool, ds);

    QBoostConfig qcfg;
    qcfg.Q = cfg.Q;
    qcfg.lambda_grid = cfg.lambda_grid;
    qcfg.max_outer_iterations = cfg.max_outer_iterations;
    qcfg.oracle = make_oracle(cfg.oracle);

    RQBoostConfig rcfg;
    rcfg.resamples = cfg.rqboost_resamples;
    rcfg.inner = qcfg;

    const FoldPlan plan = kfold(ds.num_rows(), cfg.k_folds, cfg.seed);
    NamesResult res;
    std::ostringstream fold_csv;
    fold_csv << "technique,fold,auc\n";

    for (int f = 0; f < cfg.k_folds; ++f) {
        const auto test_rows = plan.fold_rows(f);
        const auto train_rows = plan.complement_rows(f);
        const auto fold_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(f));

        std::vector<int> test_labels;
        for (std::size_t r : test_rows) test_labels.push_back(ds.labels[r]);

        { // random forest on the weak-classifier feature matrix
            const LabeledDataset train_feats = feats.subset(train_rows);
            const ForestModel rf = forest_fit(train_feats.features, train_feats.labels,
                                              cfg.forest_trees, -1, 0, mix_seed(fold_seed, 10));
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(forest_predict_proba(rf, feats.features[r]));
            res.forest_auc.push_back(auc(scores, test_labels));
        }

        { // QBoost with a single train/validation split
            auto [inner_train, inner_val] =
                split_rows(train_rows, cfg.inner_train_fraction, mix_seed(fold_seed, 11));
            const QBoostResult qr = qboost_train(pool, ds.subset(inner_train), ds.subset(inner_val),
                                                 qcfg, mix_seed(fold_seed, 12));
            // ranked by the real-valued mean vote (the ensemble's predicted
            // value), as with the probability scores of the other techniques
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(vote_score(qr.strong, ds, r));
            res.qboost_auc.push_back(auc(scores, test_labels));
        }

        { // RQBoost: resampled splits, probability scores
            RQBoostConfig rfold = rcfg;
            rfold.seed = mix_seed(fold_seed, 13);
            const LabeledDataset train_ds = ds.subset(train_rows);
            const ProbabilityModel model = rqboost_train(pool, train_ds, rfold);
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(rqboost_predict_proba(model, ds, r));
            res.rqboost_auc.push_back(auc(scores, test_labels));
        }

        fold_csv << "random_forest," << f << "," << fmt(res.forest_auc.back()) << "\n"
                 << "qboost," << f << "," << fmt(res.qboost_auc.back()) << "\n"
                 << "rqboost," << f << "," << fmt(res.rqboost_auc.back()) << "\n";
    }

    res.forest_summary = summarize(res.forest_auc);
    res.qboost_summary = summarize(res.qboost_auc);
    res.rqboost_summary = summarize(res.rqboost_auc);

    const std::string fold_path = cfg.out_dir + "/names_auc.csv";
    write_file_atomic(fold_path, fold_csv.str());
    std::ostringstream summary;
    summary << "technique,min,q1,median,mean,q3,max,std_dev\n"
            << summary_csv_row("random_forest", res.forest_summary)
            << summary_csv_row("qboost", res.qboost_summary)
            << summary_csv_row("rqboost", res.rqboost_summary);
    const std::string summary_path = cfg.out_dir + "/names_summary.csv";
    write_file_atomic(summary_path, summary.str());
    res.outputs = {fold_path, summary_path};
    write_manifest(cfg.out_dir, "names", cfg.seed, config_echo_json(cfg), res.outputs,
                   dataset_hash(ds));
    return res;
}

LinsepResult run_linsep(const LinsepConfig& raw_cfg) {
    LinsepConfig cfg = raw_cfg;
    if (!cfg.ice.quantization_step_fraction) cfg.ice.quantization_step_fraction = 1.0 / 8.0;
    cfg.solver.num_reads = std::min(cfg.solver.num_reads, 4u);
    cfg.solver.sweeps_per_read = std::min(cfg.solver.sweeps_per_read, 16u);
    ensure_dir(cfg.out_dir);
    const LabeledDataset ds = gen_linsep(cfg.seed);
    const auto pool = linsep_weak_pool();

    LinsepResult res;
    res.dataset_hash = dataset_hash(ds);

    const auto graph = std::make_shared<ChimeraGraph>(build_chimera(cfg.chimera_m));
    std::vector<std::size_t> all_rows(ds.num_rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    const auto [train_rows, val_rows] =
        split_rows(all_rows, cfg.inner_train_fraction, mix_seed(cfg.seed, 21));
    const LabeledDataset train_ds = ds.subset(train_rows);
    const LabeledDataset val_ds = ds.subset(val_rows);

    std::ostringstream grid_csv;
    grid_csv << "lambda,chain_strength,validation_error,accuracy,bait_included,tp,fn,fp,tn,members\n";

    std::size_t cell_index = 0;
    for (double lambda : cfg.lambda_grid)
        for (double alpha : cfg.alpha_grid) {
            BoostOracle oracle;
            oracle.kind = OracleKind::hardware_model;
            oracle.graph = graph;
            oracle.ice = cfg.ice;
            oracle.solver = cfg.solver;
            oracle.sweep_chain_strength = false;
            oracle.fixed_chain_strength = alpha;

            QBoostConfig qcfg;
            qcfg.Q = cfg.Q;
            qcfg.lambda_grid = {lambda};
            qcfg.max_outer_iterations = cfg.max_outer_iterations;
            qcfg.oracle = std::move(oracle);

            const QBoostResult qr =
                qboost_train(pool, train_ds, val_ds, qcfg, mix_seed(cfg.seed, 100 + cell_index));

            LinsepQBoostCell cell;
            cell.lambda = lambda;
            cell.chain_strength = alpha;
            cell.validation_error = classification_error(qr.strong, val_ds);
            std::vector<int> preds;
            for (std::size_t r = 0; r < ds.num_rows(); ++r) preds.push_back(predict(qr.strong, ds, r));
            cell.cm = confusion(preds, ds.labels);
            cell.accuracy = cell.cm.accuracy();
            for (const auto& m : qr.strong.members) {
                cell.members.push_back(m.id);
                if (const auto* col = std::get_if<RawColumn>(&m.rule); col && col->column_index == 12)
                    cell.bait_included = true;
            }
            grid_csv << fmt(lambda) << "," << fmt(alpha) << "," << fmt(cell.validation_error) << ","
                     << fmt(cell.accuracy) << "," << (cell.bait_included ? 1 : 0) << ","
                     << cell.cm.tp << "," << cell.cm.fn << "," << cell.cm.fp << "," << cell.cm.tn
                     << ",";
            for (std::size_t i = 0; i < cell.members.size(); ++i)
                grid_csv << (i ? ";" : "") << cell.members[i];
            grid_csv << "\n";
            res.qboost_cells.push_back(std::move(cell));
            ++cell_index;
        }

    // reported cell: the nearest-rank median of the grid by validation error,
    // i.e. the representative run rather than the single luckiest anneal
    {
        std::vector<std::size_t> order(res.qboost_cells.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& ca = res.qboost_cells[a];
            const auto& cb = res.qboost_cells[b];
            if (ca.validation_error != cb.validation_error)
                return ca.validation_error < cb.validation_error;
            if (ca.lambda != cb.lambda) return ca.lambda > cb.lambda;
            return ca.chain_strength < cb.chain_strength;
        });
        res.selected_cell = order[(order.size() - 1) / 2];
    }

    // classical baselines on columns 2..13
    std::vector<std::vector<double>> X(ds.num_rows());
    for (std::size_t r = 0; r < ds.num_rows(); ++r)
        X[r].assign(ds.features[r].begin() + 1, ds.features[r].end());

    std::ostringstream logi_csv;
    logi_csv << "penalty,lambda,accuracy,nonzero_weights\n";
    for (Penalty penalty : {Penalty::l2, Penalty::l1})
        for (double lambda : cfg.logistic_lambda_grid) {
            const LogisticModel model = logistic_fit(X, ds.labels, penalty, lambda, 1e-9, 20000);
            std::vector<int> preds;
            for (const auto& row : X)
                preds.push_back(logistic_predict_proba(model, row) > 0.5 ? 1 : -1);
            LinsepLogisticCell cell;
            cell.penalty = penalty;
            cell.lambda = lambda;
            cell.accuracy = confusion(preds, ds.labels).accuracy();
            for (double w : model.weights)
                if (w != 0.0) ++cell.nonzero_weights;
            if (cell.accuracy == 1.0) {
                if (penalty == Penalty::l2) res.l2_reaches_perfect = true;
                else res.l1_reaches_perfect = true;
            }
            logi_csv << (penalty == Penalty::l2 ? "l2" : "l1") << "," << fmt(lambda) << ","
                     << fmt(cell.accuracy) << "," << cell.nonzero_weights << "\n";
            res.logistic_cells.push_back(cell);
        }

    const std::string grid_path = cfg.out_dir + "/linsep_qboost_grid.csv";
    const std::string logi_path = cfg.out_dir + "/linsep_logistic.csv";
    write_file_atomic(grid_path, grid_csv.str());
    write_file_atomic(logi_path, logi_csv.str());

    const auto& sel = res.qboost_cells[res.selected_cell];
    nlohmann::json selj;
    selj["lambda"] = sel.lambda;
    selj["chain_strength"] = sel.chain_strength;
    selj["validation_error"] = sel.validation_error;
    selj["accuracy"] = sel.accuracy;
    selj["bait_included"] = sel.bait_included;
    selj["members"] = sel.members;
    selj["confusion"] = {{"tp", sel.cm.tp}, {"fn", sel.cm.fn}, {"fp", sel.cm.fp}, {"tn", sel.cm.tn}};
    const std::string sel_path = cfg.out_dir + "/linsep_selected.json";
    write_file_atomic(sel_path, selj.dump(2) + "\n");

    res.outputs = {grid_path, logi_path, sel_path};
    write_manifest(cfg.out_dir, "linsep", cfg.seed, config_echo_json(cfg), res.outputs,
                   res.dataset_hash);
    return res;
}

namespace {

// class-stratified folds so every fold sees both clip labels
std::vector<int> stratified_folds(const std::vector<int>& labels, int k, std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == 1 ? pos : neg).push_back(i);
    std::mt19937_64 eng = make_engine(seed);
    std::shuffle(pos.begin(), pos.end(), eng);
    std::shuffle(neg.begin(), neg.end(), eng);
    std::vector<int> fold(labels.size(), 0);
    int next = 0;
    for (std::size_t i : pos) fold[i] = next++ % k;
    for (std::size_t i : neg) fold[i] = next++ % k;
    return fold;
}

std::vector<std::vector<double>> standardize(const std::vector<std::vector<double>>& X,
                                             const std::vector<std::size_t>& fit_rows) {
    const std::size_t p = X.front().size();
    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (std::size_t r : fit_rows)
        for (std::size_t f = 0; f < p; ++f) mean[f] += X[r][f];
    for (double& m : mean) m /= static_cast<double>(fit_rows.size());
    for (std::size_t r : fit_rows)
        for (std::size_t f = 0; f < p; ++f) sd[f] += (X[r][f] - mean[f]) * (X[r][f] - mean[f]);
    for (double& s : sd) s = std::sqrt(s / static_cast<double>(fit_rows.size())) + 1e-12;
    std::vector<std::vector<double>> out(X.size(), std::vector<double>(p));
    for (std::size_t r = 0; r < X.size(); ++r)
        for (std::size_t f = 0; f < p; ++f) out[r][f] = (X[r][f] - mean[f]) / sd[f];
    return out;
}

} // namespace

SeizureResult run_seizure(const SeizureConfig& cfg) {
    ensure_dir(cfg.out_dir);

    FeatureConfig fcfg = cfg.features;
    const std::size_t samples =
        static_cast<std::size_t>(std::llround(cfg.seconds * cfg.sample_rate));
    if (fcfg.windows.empty()) {
        const std::size_t w = samples / 4;
        for (int i = 0; i < 4; ++i) fcfg.windows.push_back({static_cast<std::size_t>(i) * w, w});
    }
    if (fcfg.quantiles.empty()) fcfg.quantiles = {0.25, 0.75};

    LabeledDataset ds;
    for (int i = 0; i < cfg.clips_per_class; ++i) {
        for (ClipLabel label : {ClipLabel::interictal, ClipLabel::preictal}) {
            const std::uint64_t clip_seed =
                mix_seed(cfg.seed, label == ClipLabel::preictal ? 200 + i : 100 + i);
            const TimeSeriesClip clip = gen_synthetic_eeg(cfg.channels, cfg.seconds,
                                                          cfg.sample_rate, label, clip_seed, cfg.gen);
            ds.features.push_back(extract_features(clip, fcfg));
            ds.labels.push_back(label == ClipLabel::preictal ? 1 : -1);
        }
    }
    SeizureResult res;
    res.feature_dim = ds.num_features();
    for (std::size_t f = 0; f < res.feature_dim; ++f) ds.feature_names.push_back("f" + std::to_string(f));

    QBoostConfig qcfg;
    qcfg.Q = cfg.Q;
    qcfg.lambda_grid = cfg.lambda_grid;
    qcfg.max_outer_iterations = cfg.max_outer_iterations;
    qcfg.oracle = make_oracle(cfg.oracle);

    const std::vector<int> fold_of = stratified_folds(ds.labels, cfg.k_folds, mix_seed(cfg.seed, 31));
    std::ostringstream fold_csv;
    fold_csv << "technique,fold,auc\n";

    for (int f = 0; f < cfg.k_folds; ++f) {
        std::vector<std::size_t> train_rows, test_rows;
        for (std::size_t i = 0; i < ds.num_rows(); ++i)
            (fold_of[i] == f ? test_rows : train_rows).push_back(i);
        std::vector<int> test_labels;
        for (std::size_t r : test_rows) test_labels.push_back(ds.labels[r]);
        const auto fold_seed = mix_seed(cfg.seed, 400 + static_cast<std::uint64_t>(f));

        // stump pool thresholded on this fold's training rows
        const BinarizeResult bin = binarize_features(ds, train_rows);

        { // logistic on standardized real features
            const auto Xz = standardize(ds.features, train_rows);
            std::vector<std::vector<double>> Xtr;
            std::vector<int> ytr;
            for (std::size_t r : train_rows) {
                Xtr.push_back(Xz[r]);
                ytr.push_back(ds.labels[r]);
            }
            const LogisticModel lr = logistic_fit(Xtr, ytr, Penalty::l2, cfg.logistic_lambda);
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(logistic_predict_proba(lr, Xz[r]));
            fold_csv << "logistic_l2," << f << "," << fmt(auc(scores, test_labels)) << "\n";
            res.auc_by_technique["logistic_l2"].push_back(auc(scores, test_labels));
        }

        { // random forest on real features
            std::vector<std::vector<double>> Xtr;
            std::vector<int> ytr;
            for (std::size_t r : train_rows) {
                Xtr.push_back(ds.features[r]);
                ytr.push_back(ds.labels[r]);
            }
            const ForestModel rf = forest_fit(Xtr, ytr, cfg.forest_trees, -1, 0, mix_seed(fold_seed, 1));
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(forest_predict_proba(rf, ds.features[r]));
            fold_csv << "random_forest," << f << "," << fmt(auc(scores, test_labels)) << "\n";
            res.auc_by_technique["random_forest"].push_back(auc(scores, test_labels));
        }

        { // QBoost on the binarized stump pool
            auto [inner_train, inner_val] =
                split_rows(train_rows, cfg.inner_train_fraction, mix_seed(fold_seed, 2));
            const QBoostResult qr = qboost_train(bin.pool, ds.subset(inner_train),
                                                 ds.subset(inner_val), qcfg, mix_seed(fold_seed, 3));
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(vote_score(qr.strong, ds, r));
            fold_csv << "qboost," << f << "," << fmt(auc(scores, test_labels)) << "\n";
            res.auc_by_technique["qboost"].push_back(auc(scores, test_labels));
        }

        { // RQBoost
            RQBoostConfig rcfg;
            rcfg.resamples = cfg.rqboost_resamples;
            rcfg.inner = qcfg;
            rcfg.seed = mix_seed(fold_seed, 4);
            const ProbabilityModel model = rqboost_train(bin.pool, ds.subset(train_rows), rcfg);
            std::vector<double> scores;
            for (std::size_t r : test_rows) scores.push_back(rqboost_predict_proba(model, ds, r));
            fold_csv << "rqboost," << f << "," << fmt(auc(scores, test_labels)) << "\n";
            res.auc_by_technique["rqboost"].push_back(auc(scores, test_labels));
        }
    }

    const std::string fold_path = cfg.out_dir + "/seizure_auc.csv";
    write_file_atomic(fold_path, fold_csv.str());
    std::ostringstream summary;
    summary << "technique,min,q1,median,mean,q3,max,std_dev\n";
    for (const auto& [technique, values] : res.auc_by_technique)
        summary << summary_csv_row(technique, summarize(values));
    const std::string summary_path = cfg.out_dir + "/seizure_summary.csv";
    write_file_atomic(summary_path, summary.str());
    res.outputs = {fold_path, summary_path};
    write_manifest(cfg.out_dir, "seizure", cfg.seed, config_echo_json(cfg), res.outputs,
                   dataset_hash(ds));
    return res;
}

// --- JSON config plumbing ----------------------------------------------------

namespace {

SolverConfig solver_from_json(const nlohmann::json& j, SolverConfig base = {}) {
    SolverConfig cfg = base;
    if (j.contains("kind"))
        cfg.kind = j["kind"] == "brute_force" ? SolverKind::brute_force
                                              : SolverKind::simulated_annealing;
    cfg.num_reads = j.value("num_reads", cfg.num_reads);
    cfg.sweeps_per_read = j.value("sweeps_per_read", cfg.sweeps_per_read);
    cfg.t_start = j.value("t_start", cfg.t_start);
    cfg.t_end = j.value("t_end", cfg.t_end);
    if (j.contains("shape"))
        cfg.shape = j["shape"] == "linear" ? ScheduleShape::linear : ScheduleShape::geometric;
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

nlohmann::json solver_to_json(const SolverConfig& cfg) {
    return {{"kind", cfg.kind == SolverKind::brute_force ? "brute_force" : "simulated_annealing"},
            {"num_reads", cfg.num_reads},
            {"sweeps_per_read", cfg.sweeps_per_read},
            {"t_start", cfg.t_start},
            {"t_end", cfg.t_end},
            {"shape", cfg.shape == ScheduleShape::linear ? "linear" : "geometric"},
            {"seed", cfg.seed}};
}

IceModel ice_from_json(const nlohmann::json& j, IceModel base = {}) {
    IceModel ice = base;
    ice.noise_std_fraction = j.value("noise_std_fraction", ice.noise_std_fraction);
    ice.h_full_range = j.value("h_full_range", ice.h_full_range);
    ice.j_full_range = j.value("j_full_range", ice.j_full_range);
    if (j.contains("quantization_step_fraction") && !j["quantization_step_fraction"].is_null())
        ice.quantization_step_fraction = j["quantization_step_fraction"].get<double>();
    return ice;
}

nlohmann::json ice_to_json(const IceModel& ice) {
    nlohmann::json j = {{"noise_std_fraction", ice.noise_std_fraction},
                        {"h_full_range", ice.h_full_range},
                        {"j_full_range", ice.j_full_range}};
    if (ice.quantization_step_fraction)
        j["quantization_step_fraction"] = *ice.quantization_step_fraction;
    else
        j["quantization_step_fraction"] = nullptr;
    return j;
}

OracleSpec oracle_from_json(const nlohmann::json& j, OracleSpec base = {}) {
    OracleSpec spec = base;
    spec.kind = j.value("kind", spec.kind);
    if (j.contains("solver")) spec.solver = solver_from_json(j["solver"], spec.solver);
    spec.chimera_m = j.value("chimera_m", spec.chimera_m);
    spec.chimera_defects = j.value("chimera_defects", spec.chimera_defects);
    spec.chimera_seed = j.value("chimera_seed", spec.chimera_seed);
    if (j.contains("ice")) spec.ice = ice_from_json(j["ice"], spec.ice);
    if (j.contains("chain_strength_grid"))
        spec.chain_strength_grid = j["chain_strength_grid"].get<std::vector<double>>();
    spec.sweep_chain_strength = j.value("sweep_chain_strength", spec.sweep_chain_strength);
    spec.fixed_chain_strength = j.value("fixed_chain_strength", spec.fixed_chain_strength);
    return spec;
}

nlohmann::json oracle_to_json(const OracleSpec& spec) {
    return {{"kind", spec.kind},
            {"solver", solver_to_json(spec.solver)},
            {"chimera_m", spec.chimera_m},
            {"chimera_defects", spec.chimera_defects},
            {"chimera_seed", spec.chimera_seed},
            {"ice", ice_to_json(spec.ice)},
            {"chain_strength_grid", spec.chain_strength_grid},
            {"sweep_chain_strength", spec.sweep_chain_strength},
            {"fixed_chain_strength", spec.fixed_chain_strength}};
}

} // namespace

SolverConfig solver_config_from_json(const std::string& text) {
    return solver_from_json(nlohmann::json::parse(text));
}

IceModel ice_model_from_json(const std::string& text) {
    return ice_from_json(nlohmann::json::parse(text));
}

NamesConfig names_config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    NamesConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.k_folds = j.value("k_folds", cfg.k_folds);
    cfg.male_file = j.value("male_file", cfg.male_file);
    cfg.female_file = j.value("female_file", cfg.female_file);
    cfg.synthetic_male = j.value("synthetic_male", cfg.synthetic_male);
    cfg.synthetic_female = j.value("synthetic_female", cfg.synthetic_female);
    cfg.Q = j.value("Q", cfg.Q);
    if (j.contains("lambda_grid")) cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    cfg.max_outer_iterations = j.value("max_outer_iterations", cfg.max_outer_iterations);
    cfg.inner_train_fraction = j.value("inner_train_fraction", cfg.inner_train_fraction);
    cfg.rqboost_resamples = j.value("rqboost_resamples", cfg.rqboost_resamples);
    cfg.forest_trees = j.value("forest_trees", cfg.forest_trees);
    if (j.contains("oracle")) cfg.oracle = oracle_from_json(j["oracle"], cfg.oracle);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

std::string config_echo_json(const NamesConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["k_folds"] = cfg.k_folds;
    j["male_file"] = cfg.male_file;
    j["female_file"] = cfg.female_file;
    j["synthetic_male"] = cfg.synthetic_male;
    j["synthetic_female"] = cfg.synthetic_female;
    j["Q"] = cfg.Q;
    j["lambda_grid"] = cfg.lambda_grid;
    j["max_outer_iterations"] = cfg.max_outer_iterations;
    j["inner_train_fraction"] = cfg.inner_train_fraction;
    j["rqboost_resamples"] = cfg.rqboost_resamples;
    j["forest_trees"] = cfg.forest_trees;
    j["oracle"] = oracle_to_json(cfg.oracle);
    j["out_dir"] = cfg.out_dir;
    return j.dump();
}

LinsepConfig linsep_config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    LinsepConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.Q = j.value("Q", cfg.Q);
    if (j.contains("lambda_grid")) cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    if (j.contains("alpha_grid")) cfg.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
    cfg.max_outer_iterations = j.value("max_outer_iterations", cfg.max_outer_iterations);
    cfg.inner_train_fraction = j.value("inner_train_fraction", cfg.inner_train_fraction);
    cfg.chimera_m = j.value("chimera_m", cfg.chimera_m);
    if (j.contains("ice")) cfg.ice = ice_from_json(j["ice"], cfg.ice);
    if (j.contains("solver")) cfg.solver = solver_from_json(j["solver"], cfg.solver);
    if (j.contains("logistic_lambda_grid"))
        cfg.logistic_lambda_grid = j["logistic_lambda_grid"].get<std::vector<double>>();
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

std::string config_echo_json(const LinsepConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["Q"] = cfg.Q;
    j["lambda_grid"] = cfg.lambda_grid;
    j["alpha_grid"] = cfg.alpha_grid;
    j["max_outer_iterations"] = cfg.max_outer_iterations;
    j["inner_train_fraction"] = cfg.inner_train_fraction;
    j["chimera_m"] = cfg.chimera_m;
    j["ice"] = ice_to_json(cfg.ice);
    j["solver"] = solver_to_json(cfg.solver);
    j["logistic_lambda_grid"] = cfg.logistic_lambda_grid;
    j["out_dir"] = cfg.out_dir;
    return j.dump();
}

SeizureConfig seizure_config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SeizureConfig cfg;
    cfg.seed = j.value("seed", cfg.seed);
    cfg.clips_per_class = j.value("clips_per_class", cfg.clips_per_class);
    cfg.channels = j.value("channels", cfg.channels);
    cfg.seconds = j.value("seconds", cfg.seconds);
    cfg.sample_rate = j.value("sample_rate", cfg.sample_rate);
    cfg.k_folds = j.value("k_folds", cfg.k_folds);
    cfg.Q = j.value("Q", cfg.Q);
    if (j.contains("lambda_grid")) cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    cfg.max_outer_iterations = j.value("max_outer_iterations", cfg.max_outer_iterations);
    cfg.inner_train_fraction = j.value("inner_train_fraction", cfg.inner_train_fraction);
    cfg.rqboost_resamples = j.value("rqboost_resamples", cfg.rqboost_resamples);
    cfg.forest_trees = j.value("forest_trees", cfg.forest_trees);
    cfg.logistic_lambda = j.value("logistic_lambda", cfg.logistic_lambda);
    if (j.contains("oracle")) cfg.oracle = oracle_from_json(j["oracle"], cfg.oracle);
    if (j.contains("spectrum_features")) cfg.features.spectrum = j["spectrum_features"].get<bool>();
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    return cfg;
}

std::string config_echo_json(const SeizureConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["clips_per_class"] = cfg.clips_per_class;
    j["channels"] = cfg.channels;
    j["seconds"] = cfg.seconds;
    j["sample_rate"] = cfg.sample_rate;
    j["k_folds"] = cfg.k_folds;
    j["Q"] = cfg.Q;
    j["lambda_grid"] = cfg.lambda_grid;
    j["max_outer_iterations"] = cfg.max_outer_iterations;
    j["inner_train_fraction"] = cfg.inner_train_fraction;
    j["rqboost_resamples"] = cfg.rqboost_resamples;
    j["forest_trees"] = cfg.forest_trees;
    j["logistic_lambda"] = cfg.logistic_lambda;
    j["oracle"] = oracle_to_json(cfg.oracle);
    j["spectrum_features"] = cfg.features.spectrum;
    j["out_dir"] = cfg.out_dir;
    return j.dump();
}

} // namespace qboost
