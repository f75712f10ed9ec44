#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qboost/qubo.hpp"
#include "qboost/solvers.hpp"

using namespace qboost;

namespace {

QuboProblem random_problem(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    QuboProblem q;
    q.num_vars = n;
    for (VarIndex i = 0; i < n; ++i) q.set_linear(i, coef(eng));
    for (VarIndex i = 0; i < n; ++i)
        for (VarIndex j = i + 1; j < n; ++j) q.set_quadratic(i, j, coef(eng));
    return q;
}

// independent exhaustive oracle: no Gray code, no incremental updates
std::pair<double, Assignment> dumb_minimum(const QuboProblem& q) {
    double best = std::numeric_limits<double>::infinity();
    Assignment best_a;
    for (std::uint64_t mask = 0; mask < (1ULL << q.num_vars); ++mask) {
        Assignment a(q.num_vars);
        for (std::size_t i = 0; i < q.num_vars; ++i) a[i] = (mask >> i) & 1;
        const double e = energy(q, a);
        if (e < best) {
            best = e;
            best_a = a;
        }
    }
    return {best, best_a};
}

} // namespace

TEST_CASE("brute force on the two-variable example finds (0,1) at energy -1") {
    QuboProblem q;
    q.num_vars = 2;
    q.set_linear(0, 1.0);
    q.set_linear(1, -1.0);
    q.set_quadratic(0, 1, 2.0);
    const SampleSet s = brute_force_solve(q);
    CHECK(s.best().energy == doctest::Approx(-1.0));
    CHECK(s.best().assignment == Assignment{0, 1});
}

TEST_CASE("all-positive linear terms optimize to all zeros") {
    QuboProblem q;
    q.num_vars = 5;
    for (VarIndex i = 0; i < 5; ++i) q.set_linear(i, 1.0);
    const SampleSet s = brute_force_solve(q);
    CHECK(s.best().assignment == Assignment(5, 0));
    CHECK(s.best().energy == doctest::Approx(0.0));
}

TEST_CASE("brute force matches an independently coded exhaustive loop on 12-var problems") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const QuboProblem q = random_problem(12, 900 + seed);
        const auto [expected, expected_a] = dumb_minimum(q);
        const SampleSet s = brute_force_solve(q);
        CHECK(s.best().energy == doctest::Approx(expected).epsilon(1e-12));
        CHECK(energy(q, s.best().assignment) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("brute force reports all tied minima") {
    QuboProblem q; // two decoupled symmetric variables: 4 equal-energy states
    q.num_vars = 2;
    const SampleSet s = brute_force_solve(q);
    CHECK(s.samples.size() == 4);
    for (const auto& smp : s.samples) CHECK(smp.energy == 0.0);
}

TEST_CASE("brute force size guard") {
    QuboProblem q;
    q.num_vars = 26;
    CHECK_THROWS_AS(brute_force_solve(q), std::invalid_argument);
}

TEST_CASE("parallel brute force equals the serial reference bit for bit") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const QuboProblem q = random_problem(15, 40 + seed);
        const SampleSet par = brute_force_solve(q);
        const SampleSet ser = serial::brute_force_solve(q);
        REQUIRE(par.samples.size() == ser.samples.size());
        for (std::size_t i = 0; i < par.samples.size(); ++i) {
            CHECK(par.samples[i].assignment == ser.samples[i].assignment);
            CHECK(par.samples[i].energy == ser.samples[i].energy);
        }
    }
}

TEST_CASE("SA finds the optimum of a tiny landscape with full multiplicity") {
    QuboProblem q;
    q.num_vars = 2;
    q.set_linear(0, 1.0);
    q.set_linear(1, -1.0);
    q.set_quadratic(0, 1, 2.0);
    SolverConfig cfg;
    cfg.num_reads = 8;
    cfg.sweeps_per_read = 64;
    cfg.seed = 3;
    const SampleSet s = simulated_anneal(q, cfg);
    CHECK(s.best().assignment == Assignment{0, 1});
    CHECK(s.best().multiplicity == 8);
}

TEST_CASE("SA solves the frustrated triangle to the brute force optimum") {
    IsingProblem tri;
    tri.num_vars = 3;
    tri.set_quadratic(0, 1, 1.0);
    tri.set_quadratic(1, 2, 1.0);
    tri.set_quadratic(0, 2, 1.0);
    const QuboProblem q = ising_to_qubo(tri);
    SolverConfig cfg;
    cfg.seed = 11;
    const SampleSet sa = simulated_anneal(q, cfg);
    const SampleSet bf = brute_force_solve(q);
    CHECK(sa.best().energy == doctest::Approx(bf.best().energy).epsilon(1e-12));
}

TEST_CASE("SA is deterministic given the seed and matches the serial reference") {
    const QuboProblem q = random_problem(14, 77);
    SolverConfig cfg;
    cfg.num_reads = 16;
    cfg.sweeps_per_read = 128;
    cfg.seed = 99;
    const SampleSet a = simulated_anneal(q, cfg);
    const SampleSet b = simulated_anneal(q, cfg);
    const SampleSet c = serial::simulated_anneal(q, cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    REQUIRE(a.samples.size() == c.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].assignment == b.samples[i].assignment);
        CHECK(a.samples[i].energy == b.samples[i].energy);
        CHECK(a.samples[i].multiplicity == b.samples[i].multiplicity);
        CHECK(a.samples[i].assignment == c.samples[i].assignment);
        CHECK(a.samples[i].energy == c.samples[i].energy);
    }
}

TEST_CASE("sample energies re-evaluate exactly against the problem") {
    const QuboProblem q = random_problem(10, 5);
    SolverConfig cfg;
    cfg.seed = 1;
    for (const auto& s : simulated_anneal(q, cfg).samples)
        CHECK(s.energy == doctest::Approx(energy(q, s.assignment)).epsilon(1e-9));
    for (const auto& s : brute_force_solve(q).samples)
        CHECK(s.energy == doctest::Approx(energy(q, s.assignment)).epsilon(1e-9));
}

TEST_CASE("solver config validation") {
    SolverConfig cfg;
    cfg.t_start = 0.1;
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.num_reads = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("zero ICE noise returns an identical problem") {
    const QuboProblem q = random_problem(6, 8);
    IceModel ice;
    ice.noise_std_fraction = 0.0;
    const QuboProblem noisy = apply_ice(q, ice, 42);
    CHECK(noisy.linear == q.linear);
    CHECK(noisy.quadratic == q.quadratic);
    CHECK(noisy.offset == q.offset);
}

TEST_CASE("ICE noise is deterministic given the seed and leaves the offset alone") {
    const QuboProblem q = random_problem(6, 9);
    IceModel ice;
    const QuboProblem a = apply_ice(q, ice, 123);
    const QuboProblem b = apply_ice(q, ice, 123);
    CHECK(a.linear == b.linear);
    CHECK(a.quadratic == b.quadratic);
    CHECK(a.offset == q.offset);
    const QuboProblem c = apply_ice(q, ice, 124);
    CHECK(a.linear != c.linear);
}

TEST_CASE("ICE with fraction f then fraction 0 composes to the first alone") {
    const QuboProblem q = random_problem(5, 10);
    IceModel ice;
    IceModel off;
    off.noise_std_fraction = 0.0;
    const QuboProblem once = apply_ice(q, ice, 7);
    const QuboProblem twice = apply_ice(once, off, 8);
    CHECK(once.linear == twice.linear);
    CHECK(once.quadratic == twice.quadratic);
}

TEST_CASE("quantization rounds to the nearest step, ties away from zero") {
    QuboProblem q;
    q.num_vars = 3;
    q.set_linear(0, 0.12);
    q.set_linear(1, 0.125);
    q.set_linear(2, -0.125);
    const QuboProblem r = quantize_coefficients(q, 0.05);
    CHECK(r.linear_at(0) == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(r.linear_at(1) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(r.linear_at(2) == doctest::Approx(-0.15).epsilon(1e-12));
}

TEST_CASE("coefficients already on the grid are unchanged") {
    QuboProblem q;
    q.num_vars = 2;
    q.set_linear(0, 0.2);
    q.set_quadratic(0, 1, -0.35);
    const QuboProblem r = quantize_coefficients(q, 0.05);
    CHECK(r.linear_at(0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r.quadratic_at(0, 1) == doctest::Approx(-0.35).epsilon(1e-12));
}
