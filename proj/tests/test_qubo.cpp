#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qboost/qubo.hpp"
#include "qboost/rng.hpp"

using namespace qboost;

namespace {

QuboProblem random_problem(std::size_t n, std::uint64_t seed, double density = 1.0) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    QuboProblem q;
    q.num_vars = n;
    q.offset = coef(eng);
    for (VarIndex i = 0; i < n; ++i) q.set_linear(i, coef(eng));
    for (VarIndex i = 0; i < n; ++i)
        for (VarIndex j = i + 1; j < n; ++j)
            if (unif(eng) < density) q.set_quadratic(i, j, coef(eng));
    return q;
}

Assignment bits_of(std::uint64_t mask, std::size_t n) {
    Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = (mask >> i) & 1;
    return a;
}

} // namespace

TEST_CASE("energy of the all-zeros assignment is the offset") {
    QuboProblem q = random_problem(6, 1);
    q.offset = 0.0;
    CHECK(energy(q, Assignment(6, 0)) == 0.0);
}

TEST_CASE("two-variable hand expansion") {
    QuboProblem q;
    q.num_vars = 2;
    q.set_linear(0, 1.0);
    q.set_linear(1, -1.0);
    q.set_quadratic(0, 1, 2.0);
    CHECK(energy(q, {0, 1}) == doctest::Approx(-1.0));
    CHECK(energy(q, {1, 1}) == doctest::Approx(2.0));
}

TEST_CASE("energy rejects mismatched assignment length") {
    QuboProblem q = random_problem(4, 2);
    CHECK_THROWS_AS(energy(q, Assignment(3, 0)), std::invalid_argument);
}

TEST_CASE("construction invariants") {
    QuboProblem q;
    q.num_vars = 3;
    CHECK_THROWS_AS(q.set_quadratic(1, 1, 0.5), std::invalid_argument);
    q.set_quadratic(2, 0, 0.25); // canonicalized
    CHECK(q.quadratic.count({0, 2}) == 1);
    q.set_linear(5, 1.0);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("qubo/ising round trip is the identity within 1e-12") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const QuboProblem q = random_problem(8, 100 + seed, 0.6);
        const QuboProblem back = ising_to_qubo(qubo_to_ising(q));
        REQUIRE(back.num_vars == q.num_vars);
        for (const auto& [i, v] : q.linear)
            CHECK(back.linear_at(i) == doctest::Approx(v).epsilon(1e-12));
        for (const auto& [key, v] : q.quadratic)
            CHECK(back.quadratic_at(key.first, key.second) ==
                  doctest::Approx(v).epsilon(1e-12));
        CHECK(back.offset == doctest::Approx(q.offset).epsilon(1e-12));
    }
}

TEST_CASE("single variable conversion: h=1 gives ising h'=1/2, offset 1/2") {
    QuboProblem q;
    q.num_vars = 1;
    q.set_linear(0, 1.0);
    const IsingProblem p = qubo_to_ising(q);
    CHECK(p.linear_at(0) == doctest::Approx(0.5));
    CHECK(p.offset == doctest::Approx(0.5));
}

TEST_CASE("qubo and ising energies agree on all 256 assignments of an 8-var problem") {
    const QuboProblem q = random_problem(8, 7);
    const IsingProblem p = qubo_to_ising(q);
    for (std::uint64_t mask = 0; mask < 256; ++mask) {
        const Assignment a = bits_of(mask, 8);
        CHECK(ising_energy(p, bits_to_spins(a)) == doctest::Approx(energy(q, a)).epsilon(1e-12));
    }
}

TEST_CASE("flip_delta matches the explicit energy difference") {
    const QuboProblem q = random_problem(10, 21, 0.7);
    std::mt19937_64 eng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Assignment a = bits_of(eng(), 10);
        const VarIndex k = static_cast<VarIndex>(eng() % 10);
        Assignment b = a;
        b[k] ^= 1;
        CHECK(flip_delta(q, a, k) == doctest::Approx(energy(q, b) - energy(q, a)).epsilon(1e-12));
    }
}

TEST_CASE("energy is linear in the coefficients") {
    const QuboProblem q1 = random_problem(6, 31);
    const QuboProblem q2 = random_problem(6, 32);
    QuboProblem sum = q1;
    for (const auto& [i, v] : q2.linear) sum.add_linear(i, v);
    for (const auto& [key, v] : q2.quadratic) sum.add_quadratic(key.first, key.second, v);
    sum.offset += q2.offset;
    for (std::uint64_t mask = 0; mask < 64; ++mask) {
        const Assignment a = bits_of(mask, 6);
        CHECK(energy(sum, a) == doctest::Approx(energy(q1, a) + energy(q2, a)).epsilon(1e-12));
    }
}

TEST_CASE("JSON round trip is bit exact") {
    const QuboProblem q = random_problem(12, 5, 0.4);
    const QuboProblem back = qubo_from_json(qubo_to_json(q));
    CHECK(back.num_vars == q.num_vars);
    CHECK(back.linear == q.linear);
    CHECK(back.quadratic == q.quadratic);
    CHECK(back.offset == q.offset);
}

TEST_CASE("JSON parser rejects malformed quadratic keys and duplicates") {
    CHECK_THROWS(qubo_from_json(R"({"num_vars":2,"quadratic":{"01":1.0}})"));
    CHECK_THROWS(qubo_from_json(R"({"num_vars":2,"quadratic":{"0,1":1.0,"1,0":2.0}})"));
}

TEST_CASE("QuboView energy matches map-based energy") {
    const QuboProblem q = random_problem(9, 77, 0.5);
    const QuboView view(q);
    std::mt19937_64 eng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const Assignment a = bits_of(eng(), 9);
        CHECK(view.energy(a) == doctest::Approx(energy(q, a)).epsilon(1e-12));
    }
}
