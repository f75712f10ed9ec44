#include "qboost/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "qboost/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qboost {

void SolverConfig::validate() const {
    if (num_reads < 1) throw std::invalid_argument("num_reads must be >= 1");
    if (sweeps_per_read < 1) throw std::invalid_argument("sweeps_per_read must be >= 1");
    if (!(t_start > t_end && t_end > 0.0))
        throw std::invalid_argument("temperature schedule requires t_start > t_end > 0");
}

void IceModel::validate() const {
    if (!(noise_std_fraction >= 0.0 && noise_std_fraction < 1.0))
        throw std::invalid_argument("noise_std_fraction must be in [0,1)");
    if (!(h_full_range > 0.0 && j_full_range > 0.0))
        throw std::invalid_argument("coefficient full ranges must be positive");
    if (quantization_step_fraction && !(*quantization_step_fraction > 0.0))
        throw std::invalid_argument("quantization_step_fraction must be positive when set");
}

const Sample& SampleSet::best() const {
    if (samples.empty()) throw std::runtime_error("empty sample set");
    return samples.front();
}

std::string sampleset_to_json(const SampleSet& s) {
    nlohmann::json root;
    root["samples"] = nlohmann::json::array();
    for (const auto& smp : s.samples) {
        std::string bits(smp.assignment.size(), '0');
        for (std::size_t i = 0; i < smp.assignment.size(); ++i)
            if (smp.assignment[i]) bits[i] = '1';
        root["samples"].push_back({{"assignment", bits},
                                   {"energy", smp.energy},
                                   {"multiplicity", smp.multiplicity},
                                   {"chain_break_fraction", smp.chain_break_fraction}});
    }
    return root.dump();
}

namespace {

bool lex_less(const Assignment& a, const Assignment& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_and_merge(std::vector<Sample>& samples) {
    std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.assignment != b.assignment) return lex_less(a.assignment, b.assignment);
        return a.chain_break_fraction < b.chain_break_fraction;
    });
    std::vector<Sample> merged;
    for (auto& s : samples) {
        if (!merged.empty() && merged.back().assignment == s.assignment &&
            merged.back().energy == s.energy) {
            merged.back().multiplicity += s.multiplicity;
            merged.back().chain_break_fraction =
                std::min(merged.back().chain_break_fraction, s.chain_break_fraction);
        } else {
            merged.push_back(std::move(s));
        }
    }
    samples = std::move(merged);
}

// Enumerate one block of the assignment space in Gray-code order, keeping
// candidates within `slop` of the running minimum. High bits [low_bits, n)
// stay fixed at `base`.
void enumerate_block(const QuboView& view, Assignment base, unsigned low_bits, double slop,
                     std::vector<Assignment>& out_candidates) {
    const std::size_t n = view.num_vars;
    Assignment a = std::move(base);
    std::vector<double> field(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = view.h[i];
        for (const auto& [j, v] : view.neighbors[i])
            if (a[j]) f += v;
        field[i] = f;
    }
    double e = view.energy(a);
    double best = e;
    out_candidates.push_back(a);

    const std::uint64_t count = 1ULL << low_bits;
    for (std::uint64_t t = 1; t < count; ++t) {
        const unsigned k = std::countr_zero(t);
        e += a[k] ? -field[k] : field[k];
        const double delta = a[k] ? -1.0 : 1.0;
        a[k] ^= 1;
        for (const auto& [j, v] : view.neighbors[k]) field[j] += delta * v;
        if (e <= best + slop) {
            if (e < best) best = e;
            out_candidates.push_back(a);
        }
    }
}

SampleSet finalize_brute_force(const QuboView& view, std::vector<Assignment>& candidates) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, Assignment>> exact;
    exact.reserve(candidates.size());
    for (auto& a : candidates) {
        double e = view.energy(a); // fixed summation order, schedule independent
        best = std::min(best, e);
        exact.emplace_back(e, std::move(a));
    }
    SampleSet out;
    for (auto& [e, a] : exact)
        if (e == best) out.samples.push_back({std::move(a), e, 1, 0.0});
    sort_and_merge(out.samples);
    return out;
}

double candidate_slop(const QuboView& view) {
    double total = std::abs(view.offset);
    for (double h : view.h) total += std::abs(h);
    for (const auto& nb : view.neighbors)
        for (const auto& [j, v] : nb) total += std::abs(v) * 0.5;
    return 1e-9 * (1.0 + total);
}

SampleSet brute_force_impl(const QuboProblem& q, bool parallel) {
    if (q.num_vars > 25)
        throw std::invalid_argument("brute_force_solve limited to 25 variables, got " +
                                    std::to_string(q.num_vars));
    const QuboView view(q);
    const unsigned n = static_cast<unsigned>(q.num_vars);
    if (n == 0) {
        SampleSet out;
        out.samples.push_back({Assignment{}, q.offset, 1, 0.0});
        return out;
    }
    unsigned block_bits = 0;
    if (parallel && n > 12) block_bits = std::min(4u, n - 12);
    const unsigned low_bits = n - block_bits;
    const std::uint32_t num_blocks = 1u << block_bits;
    const double slop = candidate_slop(view);

    std::vector<std::vector<Assignment>> per_block(num_blocks);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(num_blocks); ++b) {
        Assignment base(n, 0);
        for (unsigned i = 0; i < block_bits; ++i)
            base[low_bits + i] = (b >> i) & 1;
        enumerate_block(view, std::move(base), low_bits, slop, per_block[b]);
    }

    std::vector<Assignment> candidates;
    for (auto& blk : per_block)
        for (auto& a : blk) candidates.push_back(std::move(a));
    return finalize_brute_force(view, candidates);
}

// One annealing restart; returns best-visited assignment and its exact energy.
Sample anneal_read(const QuboView& view, const SolverConfig& cfg, std::uint64_t read_seed) {
    const std::size_t n = view.num_vars;
    std::mt19937_64 eng = make_engine(read_seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<std::uint8_t>(eng() & 1ULL);

    std::vector<double> field(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f = view.h[i];
        for (const auto& [j, v] : view.neighbors[i])
            if (a[j]) f += v;
        field[i] = f;
    }
    double e = view.energy(a);
    Assignment best_a = a;
    double best_e = e;

    const std::uint32_t sweeps = cfg.sweeps_per_read;
    const double ratio = cfg.t_end / cfg.t_start;
    for (std::uint32_t sweep = 0; sweep < sweeps; ++sweep) {
        const double frac = sweeps > 1 ? static_cast<double>(sweep) / (sweeps - 1) : 1.0;
        const double t = cfg.shape == ScheduleShape::geometric
                             ? cfg.t_start * std::pow(ratio, frac)
                             : cfg.t_start + (cfg.t_end - cfg.t_start) * frac;
        const double inv_t = 1.0 / t;
        for (std::size_t k = 0; k < n; ++k) {
            const double delta_e = a[k] ? -field[k] : field[k];
            if (delta_e > 0.0 && unif(eng) >= std::exp(-delta_e * inv_t)) continue;
            const double delta = a[k] ? -1.0 : 1.0;
            a[k] ^= 1;
            e += delta_e;
            for (const auto& [j, v] : view.neighbors[k]) field[j] += delta * v;
            if (e < best_e) {
                best_e = e;
                best_a = a;
            }
        }
    }
    const double exact = view.energy(best_a);
    return {std::move(best_a), exact, 1, 0.0};
}

SampleSet simulated_anneal_impl(const QuboProblem& q, const SolverConfig& cfg, bool parallel) {
    cfg.validate();
    const QuboView view(q);
    if (q.num_vars == 0) {
        SampleSet out;
        out.samples.push_back({Assignment{}, q.offset, cfg.num_reads, 0.0});
        return out;
    }
    std::vector<Sample> reads(cfg.num_reads);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(cfg.num_reads); ++r)
        reads[r] = anneal_read(view, cfg, mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    SampleSet out;
    out.samples = std::move(reads);
    sort_and_merge(out.samples);
    return out;
}

} // namespace

SampleSet brute_force_solve(const QuboProblem& q) { return brute_force_impl(q, true); }

SampleSet simulated_anneal(const QuboProblem& q, const SolverConfig& cfg) {
    return simulated_anneal_impl(q, cfg, true);
}

namespace serial {
SampleSet brute_force_solve(const QuboProblem& q) { return brute_force_impl(q, false); }

SampleSet simulated_anneal(const QuboProblem& q, const SolverConfig& cfg) {
    return simulated_anneal_impl(q, cfg, false);
}
} // namespace serial

SampleSet solve(const QuboProblem& q, const SolverConfig& cfg) {
    cfg.validate();
    return cfg.kind == SolverKind::brute_force ? brute_force_solve(q)
                                               : simulated_anneal(q, cfg);
}

QuboProblem apply_ice(const QuboProblem& q, const IceModel& ice, std::uint64_t seed) {
    ice.validate();
    q.validate();
    QuboProblem out = q;
    if (ice.noise_std_fraction == 0.0) return out;
    std::mt19937_64 eng = make_engine(seed);
    std::normal_distribution<double> h_noise(0.0, ice.noise_std_fraction * ice.h_full_range);
    std::normal_distribution<double> j_noise(0.0, ice.noise_std_fraction * ice.j_full_range);
    // canonical draw order: linear terms ascending, then pairs ascending
    for (auto& [i, v] : out.linear) v += h_noise(eng);
    for (auto& [key, v] : out.quadratic) v += j_noise(eng);
    return out;
}

namespace {
double round_to_step(double x, double step) {
    // the tiny relative nudge keeps mathematical ties (x/step = k + 1/2) from
    // falling below .5 through representation error
    const double scaled = (x / step) * (1.0 + 1e-12);
    return std::round(scaled) * step;
}
} // namespace

QuboProblem quantize_coefficients(const QuboProblem& q, double h_step, double j_step) {
    if (!(h_step > 0.0) || !(j_step > 0.0))
        throw std::invalid_argument("quantization step must be positive");
    QuboProblem out = q;
    for (auto& [i, v] : out.linear) v = round_to_step(v, h_step);
    for (auto& [key, v] : out.quadratic) v = round_to_step(v, j_step);
    return out;
}

QuboProblem quantize_coefficients(const QuboProblem& q, double step) {
    return quantize_coefficients(q, step, step);
}

} // namespace qboost
