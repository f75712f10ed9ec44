#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qboost/chimera.hpp"
#include "qboost/qubo.hpp"
#include "qboost/solvers.hpp"

namespace qboost {

// Interaction graph of a problem: one vertex per variable, one edge per
// nonzero coupling.
struct ProblemGraph {
    std::size_t num_vars = 0;
    std::vector<VarPair> edges;

    static ProblemGraph from_qubo(const QuboProblem& q);
    static ProblemGraph complete(std::size_t n);
};

// Minor embedding: logical variable -> connected, pairwise disjoint chain of
// physical qubits.
struct Embedding {
    std::vector<std::vector<int>> chains; // each sorted ascending

    std::size_t num_chains() const { return chains.size(); }
    std::size_t total_qubits() const;
    std::size_t max_chain_length() const;
};

std::string embedding_to_json(const Embedding& e);
Embedding embedding_from_json(const std::string& text);

struct Violation {
    enum class Kind { empty_chain, missing_qubit, overlapping_chains, disconnected_chain, missing_coupler };
    Kind kind;
    std::string detail;
};

struct VerifyReport {
    bool ok = true;
    std::vector<Violation> violations;
    std::string to_string() const;
};

// Checks the three embedding invariants (disjointness, chain connectivity,
// coupler coverage of every problem edge) and reports every violation found.
VerifyReport verify_embedding(const ProblemGraph& problem, const ChimeraGraph& hardware,
                              const Embedding& emb);

// Deterministic clique embedding of K_{4m+1} into a perfect C_m. The 4m
// regular chains are L-shaped (a row arm joined to a column arm at a diagonal
// cell) of length m+1 each; the final variable rides a collector chain laid
// through the otherwise unused upper-triangle cells, which is longer. Throws
// if the graph has defects; defective graphs go through heuristic_embed.
Embedding clique_embed(const ChimeraGraph& graph);

// Randomized chain-growth search (vertex-weighted shortest paths with an
// exponential penalty on qubit reuse, plus rip-up-and-reroute refinement).
// Failure after max_tries is a normal outcome, reported as nullopt.
std::optional<Embedding> heuristic_embed(const ProblemGraph& problem, const ChimeraGraph& hardware,
                                         std::uint64_t seed, int max_tries = 10);

// Physical realization of a logical problem under an embedding. Physical
// variables are compacted: index p corresponds to qubit `qubits[p]`.
struct EmbeddedProblem {
    QuboProblem physical;
    std::vector<int> qubits;              // physical index -> qubit id
    Embedding emb;                        // original chains, in qubit ids
    std::vector<std::vector<int>> chain_vars; // logical var -> physical indices
    double chain_strength = 0.0;
};

// Splits each logical h equally across its chain, places each logical J on
// the first coupler (in canonical qubit order) joining the two chains, and
// binds every intra-chain coupler with a ferromagnetic Ising coupling of
// strength alpha written in QUBO form as the penalty 2a(x_p + x_q - 2 x_p x_q).
// Chain-consistent physical assignments therefore reproduce the logical
// energy exactly (chain offset zero).
EmbeddedProblem embed_problem(const QuboProblem& q, const ChimeraGraph& hardware,
                              const Embedding& emb, double chain_strength);

struct UnembedResult {
    Assignment logical;
    double break_fraction = 0.0; // fraction of chains with non-unanimous qubits
};

// Majority vote per chain; exact ties are broken by a coin keyed on
// (tie_seed, logical index) so results are reproducible.
UnembedResult unembed(const Assignment& physical, const EmbeddedProblem& layout,
                      std::uint64_t tie_seed);

struct HardwareResult {
    SampleSet logical;                  // energies re-evaluated against the original problem
    double mean_chain_break_fraction = 0.0;
    double chain_strength = 0.0;
};

// Emulated device pipeline: embed -> quantize (if configured) -> ICE noise ->
// anneal the physical problem -> unembed each read by majority vote ->
// re-evaluate logical energies against the original problem.
HardwareResult solve_hardware_model(const QuboProblem& q, const ChimeraGraph& graph,
                                    const Embedding& emb, double chain_strength,
                                    const IceModel& ice, const SolverConfig& cfg);

struct SweepPoint {
    double chain_strength = 0.0;
    double best_energy = 0.0;
    double best_break_fraction = 0.0;
    bool qualified = false;
};

struct SweepResult {
    std::optional<double> chain_strength; // nullopt: sweep exhausted, no qualifying value
    std::vector<SweepPoint> diagnostics;
    HardwareResult best; // result at the selected strength (empty when exhausted)
};

// Solves at every grid value; selects the smallest strength whose best sample
// has break fraction <= threshold and whose best logical energy is minimal
// among qualifying values.
SweepResult chain_strength_sweep(const QuboProblem& q, const ChimeraGraph& graph,
                                 const Embedding& emb, const std::vector<double>& alpha_grid,
                                 const IceModel& ice, const SolverConfig& cfg,
                                 double break_threshold = 0.05);

} // namespace qboost
