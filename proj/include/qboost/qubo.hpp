#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qboost {

using VarIndex = std::uint32_t;
using VarPair = std::pair<VarIndex, VarIndex>; // canonical: first < second

// Binary assignment, one 0/1 entry per variable.
using Assignment = std::vector<std::uint8_t>;

// Spin assignment with values in {-1,+1}.
using SpinAssignment = std::vector<std::int8_t>;

namespace detail {
// Shared coefficient storage for the QUBO and Ising forms. Quadratic terms
// are kept once per unordered pair under the canonical i<j key, so problem
// equality and serialization are deterministic.
struct CoefficientMap {
    std::size_t num_vars = 0;
    std::map<VarIndex, double> linear;
    std::map<VarPair, double> quadratic;
    double offset = 0.0;

    void set_linear(VarIndex i, double value);
    void add_linear(VarIndex i, double value);
    void set_quadratic(VarIndex i, VarIndex j, double value);
    void add_quadratic(VarIndex i, VarIndex j, double value);
    double linear_at(VarIndex i) const;
    double quadratic_at(VarIndex i, VarIndex j) const;

    // Throws std::invalid_argument on any invariant breach (index range,
    // diagonal pair, non-finite coefficient).
    void validate() const;

    bool operator==(const CoefficientMap&) const = default;
};
} // namespace detail

// Minimize sum_{i<j} J_ij x_i x_j + sum_i h_i x_i + offset over x in {0,1}^n.
struct QuboProblem : detail::CoefficientMap {};

// Same shape over spins s in {-1,+1}^n.
struct IsingProblem : detail::CoefficientMap {};

double energy(const QuboProblem& q, const Assignment& a);
double ising_energy(const IsingProblem& p, const SpinAssignment& s);

// Exact change in energy from flipping bit k of `a`, computed from the
// coefficients in O(deg(k)). Matches energy(flip(a,k)) - energy(a).
double flip_delta(const QuboProblem& q, const Assignment& a, VarIndex k);

// s_i = 2 x_i - 1 bijection; energies agree on corresponding assignments.
IsingProblem qubo_to_ising(const QuboProblem& q);
QuboProblem ising_to_qubo(const IsingProblem& p);

SpinAssignment bits_to_spins(const Assignment& a);
Assignment spins_to_bits(const SpinAssignment& s);

// JSON wire format:
//   {"num_vars": n, "linear": {"i": h_i, ...},
//    "quadratic": {"i,j": J_ij, ...}, "offset": c}
std::string qubo_to_json(const QuboProblem& q);
QuboProblem qubo_from_json(const std::string& text);

// Flattened adjacency built once per solve; the map form is too slow for
// inner loops.
struct QuboView {
    std::size_t num_vars;
    std::vector<double> h;
    std::vector<std::vector<std::pair<VarIndex, double>>> neighbors; // J_ij both directions
    double offset;

    explicit QuboView(const QuboProblem& q);
    double energy(const Assignment& a) const;
};

} // namespace qboost
