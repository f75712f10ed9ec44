#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qboost/qubo.hpp"

namespace qboost {

enum class SolverKind { brute_force, simulated_annealing };
enum class ScheduleShape { geometric, linear };

struct SolverConfig {
    SolverKind kind = SolverKind::simulated_annealing;
    std::uint32_t num_reads = 64;
    std::uint32_t sweeps_per_read = 512;
    double t_start = 10.0;
    double t_end = 0.05;
    ScheduleShape shape = ScheduleShape::geometric;
    std::uint64_t seed = 0;

    void validate() const; // t_start > t_end > 0, num_reads >= 1, sweeps >= 1
};

// Device misspecification of programmed coefficients: independent zero-mean
// Gaussian noise with std = noise_std_fraction * full range, plus optional
// coefficient quantization. Ranges follow the conventional device intervals
// h in [-2,2], J in [-1,1].
struct IceModel {
    double noise_std_fraction = 0.05;
    double h_full_range = 4.0;
    double j_full_range = 2.0;
    std::optional<double> quantization_step_fraction;

    void validate() const;
};

struct Sample {
    Assignment assignment;
    double energy = 0.0;
    std::uint32_t multiplicity = 1;
    double chain_break_fraction = 0.0; // nonzero only for hardware-model results
};

// Samples sorted ascending by energy (ties by assignment, lexicographic).
struct SampleSet {
    std::vector<Sample> samples;

    const Sample& best() const;
    bool empty() const { return samples.empty(); }
};

std::string sampleset_to_json(const SampleSet& s);

// Exhaustive enumeration; first sample is a global minimum and every tied
// minimum is reported. Guarded to num_vars <= 25.
SampleSet brute_force_solve(const QuboProblem& q);

// Metropolis single-bit-flip annealing. Each read is an independent restart
// reporting the best assignment visited; deterministic given cfg.seed and
// independent of thread count.
SampleSet simulated_anneal(const QuboProblem& q, const SolverConfig& cfg);

// Dispatch on cfg.kind.
SampleSet solve(const QuboProblem& q, const SolverConfig& cfg);

// Serial counterparts of the OpenMP kernels, kept as references for the
// equivalence tests and the benchmark target.
namespace serial {
SampleSet brute_force_solve(const QuboProblem& q);
SampleSet simulated_anneal(const QuboProblem& q, const SolverConfig& cfg);
} // namespace serial

// Perturb every stored coefficient with independent zero-mean Gaussian noise;
// offset untouched. Deterministic given seed; noise is drawn once per call
// (the "programming"), never per read.
QuboProblem apply_ice(const QuboProblem& q, const IceModel& ice, std::uint64_t seed);

// Round each coefficient to the nearest integer multiple of step, ties away
// from zero.
QuboProblem quantize_coefficients(const QuboProblem& q, double step);
QuboProblem quantize_coefficients(const QuboProblem& q, double h_step, double j_step);

} // namespace qboost
