#include "qboost/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "qboost/rng.hpp"

namespace qboost {

void LabeledDataset::validate() const {
    for (int y : labels)
        if (y != 1 && y != -1) throw std::invalid_argument("labels must be -1 or +1");
    if (!features.empty()) {
        if (features.size() != labels.size())
            throw std::invalid_argument("feature row count does not match label count");
        for (const auto& row : features)
            if (row.size() != features.front().size())
                throw std::invalid_argument("ragged feature matrix");
    }
    if (!names.empty() && names.size() != labels.size())
        throw std::invalid_argument("names count does not match label count");
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
    LabeledDataset out;
    out.feature_names = feature_names;
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= num_rows()) throw std::out_of_range("subset row out of range");
        out.labels.push_back(labels[r]);
        if (!features.empty()) out.features.push_back(features[r]);
        if (!names.empty()) out.names.push_back(names[r]);
    }
    return out;
}

namespace {
int sign_pm(double v) { return v > 0.0 ? 1 : -1; }

char last_alpha(const std::string& s) {
    for (auto it = s.rbegin(); it != s.rend(); ++it)
        if (std::isalpha(static_cast<unsigned char>(*it)))
            return static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
    return '\0';
}
} // namespace

int evaluate_weak(const WeakClassifier& wc, const LabeledDataset& ds, std::size_t row) {
    return std::visit(
        [&](const auto& rule) -> int {
            using T = std::decay_t<decltype(rule)>;
            if constexpr (std::is_same_v<T, ThresholdStump>) {
                const double x = ds.features.at(row).at(rule.feature_index);
                return rule.polarity * (x > rule.threshold ? 1 : -1);
            } else if constexpr (std::is_same_v<T, SuffixLetter>) {
                const char c = last_alpha(ds.names.at(row));
                return c == rule.letter ? rule.class_if_match : -rule.class_if_match;
            } else {
                const double x = ds.features.at(row).at(rule.column_index);
                return rule.polarity * sign_pm(x);
            }
        },
        wc.rule);
}

namespace {
std::string normalize_name(std::string s) {
    auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    while (!s.empty() && !std::isalpha(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void load_name_file(const std::string& path, int label, LabeledDataset& out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open names file: " + path);
    std::string line;
    std::size_t added = 0;
    while (std::getline(in, line)) {
        std::string name = normalize_name(line);
        if (name.empty()) continue;
        out.names.push_back(std::move(name));
        out.labels.push_back(label);
        ++added;
    }
    if (added == 0) throw std::runtime_error("names file is empty: " + path);
}
} // namespace

LabeledDataset load_names(const std::string& male_file, const std::string& female_file,
                          bool female_positive) {
    LabeledDataset ds;
    const int female = female_positive ? 1 : -1;
    load_name_file(male_file, -female, ds);
    load_name_file(female_file, female, ds);
    ds.validate();
    return ds;
}

namespace {
// Last-letter distributions (a..z) calibrated so the corpus behaves like the
// published one: soft Bayes AUC ~0.85, best hard-vote AUC ~0.77.
constexpr double kFemaleLast[26] = {
    0.3793, 0.0035, 0.0035, 0.0087, 0.1834, 0.0021, 0.0039, 0.0290, 0.0361,
    0.0021, 0.0035, 0.0332, 0.0091, 0.0891, 0.0112, 0.0021, 0.0010, 0.0124,
    0.0216, 0.0158, 0.0025, 0.0021, 0.0015, 0.0033, 0.1202, 0.0199};
constexpr double kMaleLast[26] = {
    0.0144, 0.0117, 0.0146, 0.0864, 0.0738, 0.0078, 0.0186, 0.0233, 0.0093,
    0.0058, 0.0369, 0.0612, 0.0320, 0.1495, 0.0563, 0.0078, 0.0019, 0.0816,
    0.1010, 0.0689, 0.0043, 0.0078, 0.0223, 0.0043, 0.0952, 0.0033};

char draw_letter(const double (&table)[26], std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(eng), acc = 0.0;
    for (int i = 0; i < 26; ++i) {
        acc += table[i];
        if (u < acc) return static_cast<char>('a' + i);
    }
    return 'z';
}

std::string draw_name(const double (&table)[26], std::mt19937_64& eng) {
    std::uniform_int_distribution<int> len_dist(3, 9);
    std::uniform_int_distribution<int> letter_dist(0, 25);
    const int len = len_dist(eng);
    std::string name(static_cast<std::size_t>(len), 'a');
    for (int i = 0; i + 1 < len; ++i) name[i] = static_cast<char>('a' + letter_dist(eng));
    name.back() = draw_letter(table, eng);
    return name;
}
} // namespace

LabeledDataset gen_names_corpus(std::uint64_t seed, std::size_t n_male, std::size_t n_female,
                                bool female_positive) {
    LabeledDataset ds;
    const int female = female_positive ? 1 : -1;
    std::mt19937_64 eng = make_engine(mix_seed(seed, 0x9a3e5ULL));
    for (std::size_t i = 0; i < n_male; ++i) {
        ds.names.push_back(draw_name(kMaleLast, eng));
        ds.labels.push_back(-female);
    }
    for (std::size_t i = 0; i < n_female; ++i) {
        ds.names.push_back(draw_name(kFemaleLast, eng));
        ds.labels.push_back(female);
    }
    return ds;
}

std::vector<WeakClassifier> names_weak_pool(bool female_positive) {
    std::vector<WeakClassifier> pool;
    const int female = female_positive ? 1 : -1;
    for (char c = 'a'; c <= 'z'; ++c) {
        pool.push_back({SuffixLetter{c, -female}, std::string("last=") + c + ":male"});
        pool.push_back({SuffixLetter{c, female}, std::string("last=") + c + ":female"});
    }
    return pool;
}

LabeledDataset weak_feature_matrix(const std::vector<WeakClassifier>& pool,
                                   const LabeledDataset& ds) {
    LabeledDataset out;
    out.labels = ds.labels;
    out.features.resize(ds.num_rows());
    for (std::size_t r = 0; r < ds.num_rows(); ++r) {
        out.features[r].reserve(pool.size());
        for (const auto& wc : pool)
            out.features[r].push_back(static_cast<double>(evaluate_weak(wc, ds, r)));
    }
    for (const auto& wc : pool) out.feature_names.push_back(wc.id);
    return out;
}

LabeledDataset gen_linsep(std::uint64_t seed) {
    constexpr std::size_t rows = 1000, cols = 13, flips = 90;
    std::mt19937_64 eng = make_engine(mix_seed(seed, 0x11525ULL));
    std::uniform_int_distribution<int> coin(0, 1);

    LabeledDataset ds;
    ds.features.assign(rows, std::vector<double>(cols, 0.0));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 1; c < cols; ++c)
            ds.features[r][c] = coin(eng) ? 1.0 : -1.0;

    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t c = 1; c <= 9; ++c) sum += ds.features[r][c]; // columns 2..10, odd count
        ds.features[r][0] = sign_pm(sum);
    }

    // bait: column 13 tracks the ground truth except on exactly 90 rows
    std::vector<std::size_t> idx(rows);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), eng);
    for (std::size_t r = 0; r < rows; ++r) ds.features[r][12] = ds.features[r][0];
    for (std::size_t i = 0; i < flips; ++i) ds.features[idx[i]][12] *= -1.0;

    ds.labels.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) ds.labels[r] = static_cast<int>(ds.features[r][0]);
    for (std::size_t c = 1; c <= cols; ++c) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "col%02zu", c);
        ds.feature_names.emplace_back(buf);
    }
    return ds;
}

std::vector<WeakClassifier> linsep_weak_pool() {
    std::vector<WeakClassifier> pool;
    for (int c = 1; c < 13; ++c) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "col%02d", c + 1);
        pool.push_back({RawColumn{c, 1}, buf});
    }
    return pool;
}

namespace {
struct BandNoise {
    std::vector<double> freq, phase;
};

BandNoise draw_band_noise(int components, double lo, double hi, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> f(lo, hi);
    std::uniform_real_distribution<double> p(0.0, 2.0 * std::numbers::pi);
    BandNoise b;
    for (int k = 0; k < components; ++k) {
        b.freq.push_back(f(eng));
        b.phase.push_back(p(eng));
    }
    return b;
}

double eval_band_noise(const BandNoise& b, double t) {
    if (b.freq.empty()) return 0.0;
    double v = 0.0;
    for (std::size_t k = 0; k < b.freq.size(); ++k)
        v += std::sin(2.0 * std::numbers::pi * b.freq[k] * t + b.phase[k]);
    return v / std::sqrt(static_cast<double>(b.freq.size()));
}
} // namespace

TimeSeriesClip gen_synthetic_eeg(int channels, double seconds, double sample_rate,
                                 ClipLabel label, std::uint64_t seed,
                                 const EegGenParams& params) {
    if (channels < 2) throw std::invalid_argument("gen_synthetic_eeg requires >= 2 channels");
    if (!(sample_rate > 0.0) || !(seconds > 0.0))
        throw std::invalid_argument("sample_rate and seconds must be positive");
    const std::size_t n = static_cast<std::size_t>(std::llround(seconds * sample_rate));

    std::mt19937_64 eng = make_engine(mix_seed(seed, 0xee9ULL));
    const BandNoise common = draw_band_noise(params.band_components, params.band_lo, params.band_hi, eng);
    std::uniform_real_distribution<double> p(0.0, 2.0 * std::numbers::pi);
    const double osc_phase = p(eng); // shared across channels

    // per-clip amplitudes; the same seed draws the same jitter for either
    // label, so a preictal clip always exceeds its interictal twin
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double common_jit = params.common_jitter * unit(eng);
    const double osc_jit = params.osc_jitter * unit(eng);
    const double common_amp =
        std::max(0.0, (label == ClipLabel::preictal ? params.preictal_common
                                                    : params.interictal_common) +
                          common_jit);
    const double osc_amp = std::max(
        0.0, (label == ClipLabel::preictal ? params.preictal_osc : params.interictal_osc) + osc_jit);

    TimeSeriesClip clip;
    clip.sample_rate = sample_rate;
    clip.label = label;
    clip.channels.resize(channels);
    for (int c = 0; c < channels; ++c) {
        const BandNoise own =
            draw_band_noise(params.band_components, params.band_lo, params.band_hi, eng);
        auto& series = clip.channels[c];
        series.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / sample_rate;
            series[i] = common_amp * eval_band_noise(common, t) +
                        params.noise_amp * eval_band_noise(own, t) +
                        osc_amp * std::sin(2.0 * std::numbers::pi * params.osc_freq * t + osc_phase);
        }
    }
    return clip;
}

namespace {

std::vector<double> median_filter(const std::vector<double>& x, int width) {
    if (width <= 1) return x;
    if (width % 2 == 0) throw std::invalid_argument("median filter width must be odd");
    const int n = static_cast<int>(x.size());
    const int radius = width / 2;
    std::vector<double> out(x.size());
    std::vector<double> buf;
    for (int i = 0; i < n; ++i) {
        buf.clear();
        for (int j = i - radius; j <= i + radius; ++j)
            buf.push_back(x[static_cast<std::size_t>(std::clamp(j, 0, n - 1))]);
        std::nth_element(buf.begin(), buf.begin() + radius, buf.end());
        out[static_cast<std::size_t>(i)] = buf[static_cast<std::size_t>(radius)];
    }
    return out;
}

std::vector<double> gaussian_filter(const std::vector<double>& x, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive");
    const int n = static_cast<int>(x.size());
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double norm = 0.0;
    for (int j = -radius; j <= radius; ++j) {
        kernel[static_cast<std::size_t>(j + radius)] = std::exp(-0.5 * j * j / (sigma * sigma));
        norm += kernel[static_cast<std::size_t>(j + radius)];
    }
    for (double& k : kernel) k /= norm;
    std::vector<double> out(x.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -radius; j <= radius; ++j)
            acc += kernel[static_cast<std::size_t>(j + radius)] *
                   x[static_cast<std::size_t>(std::clamp(i + j, 0, n - 1))];
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

void fft_inplace(std::vector<std::complex<double>>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<double> magnitude_spectrum(const std::vector<double>& x) {
    std::size_t n = 1;
    while (n < x.size()) n <<= 1;
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
    fft_inplace(a);
    std::vector<double> mag(n / 2 + 1);
    for (std::size_t i = 0; i <= n / 2; ++i) mag[i] = std::abs(a[i]);
    return mag;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = q * static_cast<double>(n - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

void window_stats(const std::vector<double>& w, const FeatureConfig& cfg,
                  std::vector<double>& out) {
    const double n = static_cast<double>(w.size());
    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    double mx = w[0], mn = w[0];
    std::size_t argmax = 0, argmin = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = w[i] - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
        if (w[i] > mx) { mx = w[i]; argmax = i; }
        if (w[i] < mn) { mn = w[i]; argmin = i; }
    }
    m2 /= n; m3 /= n; m4 /= n;
    std::vector<double> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    const double median = quantile_sorted(sorted, 0.5);
    const double sd = std::sqrt(m2);
    const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    const double kurt = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

    out.push_back(mean);
    out.push_back(median);
    out.push_back(mx);
    out.push_back(static_cast<double>(argmax));
    out.push_back(mn);
    out.push_back(static_cast<double>(argmin));
    out.push_back(sd);
    out.push_back(skew);
    out.push_back(kurt);
    for (double q : cfg.quantiles) out.push_back(quantile_sorted(sorted, q));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, sa = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        sa += (a[i] - ma) * (a[i] - ma);
        sb += (b[i] - mb) * (b[i] - mb);
    }
    if (sa == 0.0 || sb == 0.0) return 0.0; // constant channel: correlation undefined
    return sab / std::sqrt(sa * sb);
}

} // namespace

std::size_t feature_count(const FeatureConfig& cfg, std::size_t channels) {
    std::size_t count = channels * cfg.windows.size() * cfg.stats_per_window();
    if (cfg.include_correlation) count += channels * (channels - 1) / 2;
    return count;
}

std::vector<double> extract_features(const TimeSeriesClip& clip, const FeatureConfig& cfg) {
    if (clip.channels.empty()) throw std::invalid_argument("clip has no channels");
    if (cfg.windows.empty()) throw std::invalid_argument("no analysis windows configured");
    if (cfg.include_correlation && clip.channels.size() < 2)
        throw std::invalid_argument("channel correlation requires at least 2 channels");
    const std::size_t n = clip.samples_per_channel();
    for (const auto& w : cfg.windows)
        if (w.length == 0 || w.start + w.length > n)
            throw std::invalid_argument("analysis window outside clip bounds");

    std::vector<std::vector<double>> filtered;
    filtered.reserve(clip.channels.size());
    for (const auto& ch : clip.channels) {
        switch (cfg.filter) {
            case FeatureConfig::Filter::median: filtered.push_back(median_filter(ch, cfg.median_width)); break;
            case FeatureConfig::Filter::gaussian: filtered.push_back(gaussian_filter(ch, cfg.gaussian_sigma)); break;
            case FeatureConfig::Filter::none: filtered.push_back(ch); break;
        }
    }

    std::vector<double> out;
    out.reserve(feature_count(cfg, clip.channels.size()));
    for (const auto& ch : filtered)
        for (const auto& win : cfg.windows) {
            std::vector<double> w(ch.begin() + static_cast<std::ptrdiff_t>(win.start),
                                  ch.begin() + static_cast<std::ptrdiff_t>(win.start + win.length));
            if (cfg.spectrum) w = magnitude_spectrum(w);
            window_stats(w, cfg, out);
        }

    if (cfg.include_correlation)
        for (std::size_t i = 1; i < filtered.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) out.push_back(pearson(filtered[i], filtered[j]));
    return out;
}

BinarizeResult binarize_features(const LabeledDataset& real_ds,
                                 const std::vector<std::size_t>& training_rows) {
    real_ds.validate();
    if (real_ds.features.empty()) throw std::invalid_argument("binarize_features needs real features");
    if (training_rows.empty()) throw std::invalid_argument("empty training split");

    const std::size_t p = real_ds.num_features();
    BinarizeResult res;
    res.binary.labels = real_ds.labels;
    res.binary.names = real_ds.names;
    res.binary.feature_names = real_ds.feature_names;
    res.binary.features.assign(real_ds.num_rows(), std::vector<double>(p, 0.0));
    res.degenerate.assign(p, false);

    for (std::size_t f = 0; f < p; ++f) {
        std::vector<double> train_vals;
        train_vals.reserve(training_rows.size());
        for (std::size_t r : training_rows) train_vals.push_back(real_ds.features[r][f]);
        std::sort(train_vals.begin(), train_vals.end());
        const double thr = quantile_sorted(train_vals, 0.5);
        res.degenerate[f] = train_vals.front() == train_vals.back();

        long corr = 0;
        for (std::size_t r : training_rows) {
            const int o = real_ds.features[r][f] > thr ? 1 : -1;
            corr += o * real_ds.labels[r];
        }
        const int polarity = corr >= 0 ? 1 : -1;

        std::string fname = f < real_ds.feature_names.size() ? real_ds.feature_names[f]
                                                             : "f" + std::to_string(f);
        WeakClassifier wc{ThresholdStump{static_cast<int>(f), thr, polarity},
                          "stump:" + fname + (polarity > 0 ? ":+" : ":-")};
        for (std::size_t r = 0; r < real_ds.num_rows(); ++r)
            res.binary.features[r][f] =
                static_cast<double>(polarity * (real_ds.features[r][f] > thr ? 1 : -1));
        res.pool.push_back(std::move(wc));
    }
    return res;
}

void dataset_to_csv(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t f = 0; f < ds.num_features(); ++f) {
        out << (f < ds.feature_names.size() ? ds.feature_names[f] : "f" + std::to_string(f)) << ",";
    }
    out << "label\n";
    char buf[40];
    for (std::size_t r = 0; r < ds.num_rows(); ++r) {
        for (std::size_t f = 0; f < ds.num_features(); ++f) {
            std::snprintf(buf, sizeof buf, "%.17g", ds.features[r][f]);
            out << buf << ",";
        }
        out << ds.labels[r] << "\n";
    }
}

void clip_to_csv(const TimeSeriesClip& clip, const std::string& csv_path,
                 const std::string& sidecar_json_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    for (std::size_t c = 0; c < clip.channels.size(); ++c)
        out << (c ? "," : "") << "ch" << c;
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < clip.samples_per_channel(); ++i) {
        for (std::size_t c = 0; c < clip.channels.size(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", clip.channels[c][i]);
            out << (c ? "," : "") << buf;
        }
        out << "\n";
    }
    nlohmann::json j;
    j["sample_rate"] = clip.sample_rate;
    j["label"] = clip.label == ClipLabel::preictal ? "preictal" : "interictal";
    j["channels"] = clip.channels.size();
    std::ofstream side(sidecar_json_path);
    if (!side) throw std::runtime_error("cannot write " + sidecar_json_path);
    side << j.dump(2) << "\n";
}

} // namespace qboost
