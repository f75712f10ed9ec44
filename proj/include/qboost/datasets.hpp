#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qboost/weak.hpp"

namespace qboost {

struct LabeledDataset {
    std::vector<std::vector<double>> features; // row-major; may be empty for text-only data
    std::vector<int> labels;                   // -1/+1
    std::vector<std::string> feature_names;
    std::vector<std::string> names; // per-row text for the names corpus, else empty

    std::size_t num_rows() const { return labels.size(); }
    std::size_t num_features() const { return features.empty() ? 0 : features.front().size(); }
    void validate() const;
    LabeledDataset subset(const std::vector<std::size_t>& rows) const;
};

int evaluate_weak(const WeakClassifier& wc, const LabeledDataset& ds, std::size_t row);

// --- names corpus ---------------------------------------------------------

// One name per line; trimmed, lowercased, duplicates preserved. Female rows
// are labeled +1 under the default convention.
LabeledDataset load_names(const std::string& male_file, const std::string& female_file,
                          bool female_positive = true);

// Synthetic stand-in for the published corpus: names whose final letters are
// drawn from calibrated per-gender distributions (2943 male, 5001 female by
// default).
LabeledDataset gen_names_corpus(std::uint64_t seed, std::size_t n_male = 2943,
                                std::size_t n_female = 5001, bool female_positive = true);

// 26 letters x {male, female} = 52 suffix classifiers.
std::vector<WeakClassifier> names_weak_pool(bool female_positive = true);

// Feature matrix whose columns are the pool outputs; used by the classical
// baselines on the names data.
LabeledDataset weak_feature_matrix(const std::vector<WeakClassifier>& pool,
                                   const LabeledDataset& ds);

// --- linearly separable matrix --------------------------------------------

// 1000 x 13 matrix of -1/+1. Column 1 (index 0) is the ground truth
// sign(sum of columns 2..10); column 13 is the bait: a copy of column 1 with
// exactly 90 rows flipped, so it agrees on exactly 91% of rows.
LabeledDataset gen_linsep(std::uint64_t seed);

// Raw-column classifier pool over columns 2..13 (feature indices 1..12).
std::vector<WeakClassifier> linsep_weak_pool();

// --- synthetic EEG ---------------------------------------------------------

enum class ClipLabel { interictal, preictal };

struct TimeSeriesClip {
    std::vector<std::vector<double>> channels;
    double sample_rate = 0.0;
    ClipLabel label = ClipLabel::interictal;

    std::size_t samples_per_channel() const { return channels.empty() ? 0 : channels.front().size(); }
};

struct EegGenParams {
    double noise_amp = 1.2;
    double osc_freq = 20.0;         // Hz, designated band oscillation
    double interictal_common = 0.45; // shared-source mixing, drives correlation
    double preictal_common = 0.75;
    double interictal_osc = 0.25;
    double preictal_osc = 0.55;
    int band_components = 8;        // sinusoids composing the band-limited noise
    double band_lo = 4.0, band_hi = 40.0;
    // per-clip spread of the label-dependent amplitudes; classes overlap so
    // desk-scale classification stays non-trivial
    double common_jitter = 0.35;
    double osc_jitter = 0.20;
};

TimeSeriesClip gen_synthetic_eeg(int channels, double seconds, double sample_rate,
                                 ClipLabel label, std::uint64_t seed,
                                 const EegGenParams& params = {});

// --- feature extraction (time-series -> real features) ---------------------

struct WindowSpec {
    std::size_t start = 0;
    std::size_t length = 0;
};

struct FeatureConfig {
    enum class Filter { none, median, gaussian };
    Filter filter = Filter::median;
    int median_width = 5;       // odd
    double gaussian_sigma = 2.0;
    std::vector<WindowSpec> windows; // at least one
    bool spectrum = false;           // stats over the magnitude spectrum of each window
    std::vector<double> quantiles;   // extra per-window quantiles
    bool include_correlation = true; // append lower triangle of channel correlations

    std::size_t stats_per_window() const { return 9 + quantiles.size(); }
};

// Per channel and window: mean, median, max, argmax, min, argmin, std,
// skewness, kurtosis and configured quantiles, over either the filtered time
// samples or their magnitude spectrum; then the flattened lower triangle of
// the Pearson channel-correlation matrix.
std::vector<double> extract_features(const TimeSeriesClip& clip, const FeatureConfig& cfg);

std::size_t feature_count(const FeatureConfig& cfg, std::size_t channels);

// --- binarization -----------------------------------------------------------

struct BinarizeResult {
    LabeledDataset binary;              // -1/+1 feature matrix over all rows
    std::vector<WeakClassifier> pool;   // matching threshold stumps
    std::vector<bool> degenerate;       // per feature: constant on the training split
};

// Thresholds each feature at its training-split median, with polarity chosen
// to correlate positively with the training labels.
BinarizeResult binarize_features(const LabeledDataset& real_ds,
                                 const std::vector<std::size_t>& training_rows);

// --- CSV --------------------------------------------------------------------

void dataset_to_csv(const LabeledDataset& ds, const std::string& path);
void clip_to_csv(const TimeSeriesClip& clip, const std::string& csv_path,
                 const std::string& sidecar_json_path);

} // namespace qboost
