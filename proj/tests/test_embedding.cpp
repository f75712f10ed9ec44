#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "qboost/embedding.hpp"
#include "qboost/rng.hpp"

using namespace qboost;

namespace {

QuboProblem random_complete_qubo(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    QuboProblem q;
    q.num_vars = n;
    for (VarIndex i = 0; i < n; ++i) q.set_linear(i, coef(eng));
    for (VarIndex i = 0; i < n; ++i)
        for (VarIndex j = i + 1; j < n; ++j) q.set_quadratic(i, j, coef(eng));
    return q;
}

} // namespace

TEST_CASE("clique_embed yields 4m+1 verified chains for m = 1..12") {
    for (int m = 1; m <= 12; ++m) {
        const ChimeraGraph g = build_chimera(m);
        const Embedding emb = clique_embed(g);
        CHECK(emb.num_chains() == static_cast<std::size_t>(4 * m + 1));
        CHECK(emb.total_qubits() <= static_cast<std::size_t>(8 * m * m));
        const auto report = verify_embedding(ProblemGraph::complete(emb.num_chains()), g, emb);
        CHECK_MESSAGE(report.ok, "m=", m, ": ", report.to_string());
    }
}

TEST_CASE("clique_embed regular chains have length m+1") {
    for (int m : {2, 5, 8, 12}) {
        const Embedding emb = clique_embed(build_chimera(m));
        for (std::size_t v = 0; v + 1 < emb.num_chains(); ++v)
            CHECK(emb.chains[v].size() == static_cast<std::size_t>(m + 1));
    }
}

TEST_CASE("K_49 on C12 and K_33 on C8") {
    CHECK(clique_embed(build_chimera(12)).num_chains() == 49);
    CHECK(clique_embed(build_chimera(8)).num_chains() == 33);
}

TEST_CASE("clique_embed refuses defective graphs") {
    CHECK_THROWS_AS(clique_embed(build_chimera(2, {3})), std::invalid_argument);
}

TEST_CASE("qubit cost of the clique embedding grows quadratically in n") {
    for (int m = 2; m <= 12; ++m) {
        const Embedding emb = clique_embed(build_chimera(m));
        const double n = static_cast<double>(emb.num_chains());
        CHECK(static_cast<double>(emb.total_qubits()) / (n * n) < 0.5);
    }
}

TEST_CASE("verify_embedding reports sharing, disconnection and missing couplers") {
    const ChimeraGraph g = build_chimera(2);
    ProblemGraph pg;
    pg.num_vars = 2;
    pg.edges = {{0, 1}};

    Embedding shared;
    shared.chains = {{0, 4}, {0, 5}};
    const auto rep1 = verify_embedding(pg, g, shared);
    CHECK_FALSE(rep1.ok);
    bool saw_overlap = false;
    for (const auto& v : rep1.violations)
        if (v.kind == Violation::Kind::overlapping_chains) saw_overlap = true;
    CHECK(saw_overlap);

    Embedding disconnected;
    disconnected.chains = {{0, 1}, {4}}; // same shore, no intra-cell edge
    const auto rep2 = verify_embedding(pg, g, disconnected);
    CHECK_FALSE(rep2.ok);
    bool saw_disconnect = false;
    for (const auto& v : rep2.violations)
        if (v.kind == Violation::Kind::disconnected_chain) saw_disconnect = true;
    CHECK(saw_disconnect);

    Embedding uncoupled;
    uncoupled.chains = {{0}, {g.qubit_id(1, 1, 0, 0)}}; // far apart
    const auto rep3 = verify_embedding(pg, g, uncoupled);
    CHECK_FALSE(rep3.ok);
    bool saw_missing = false;
    for (const auto& v : rep3.violations)
        if (v.kind == Violation::Kind::missing_coupler) saw_missing = true;
    CHECK(saw_missing);
}

TEST_CASE("heuristic embeds a 4-cycle into one cell, finding single-qubit chains") {
    const ChimeraGraph g = build_chimera(1);
    ProblemGraph pg;
    pg.num_vars = 4;
    pg.edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}}; // bipartite, fits K_{4,4} natively
    bool found_identity_style = false;
    for (std::uint64_t seed = 0; seed < 10 && !found_identity_style; ++seed) {
        const auto emb = heuristic_embed(pg, g, seed);
        REQUIRE(emb.has_value());
        CHECK(verify_embedding(pg, g, *emb).ok);
        found_identity_style = emb->total_qubits() == 4;
    }
    CHECK(found_identity_style);
}

TEST_CASE("heuristic embeds K_10 into C4 within a 40 qubit budget") {
    const ChimeraGraph g = build_chimera(4);
    const ProblemGraph pg = ProblemGraph::complete(10);
    const auto emb = heuristic_embed(pg, g, 1);
    REQUIRE(emb.has_value());
    CHECK(verify_embedding(pg, g, *emb).ok);
    CHECK(emb->total_qubits() <= 40);
}

TEST_CASE("heuristic embedding of K_30 into C2 fails as a value") {
    const auto emb = heuristic_embed(ProblemGraph::complete(30), build_chimera(2), 1, 3);
    CHECK_FALSE(emb.has_value());
}

TEST_CASE("heuristic embedding is deterministic given the seed") {
    const ChimeraGraph g = build_chimera(3);
    const ProblemGraph pg = ProblemGraph::complete(8);
    const auto a = heuristic_embed(pg, g, 17);
    const auto b = heuristic_embed(pg, g, 17);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(a->chains == b->chains);
}

TEST_CASE("embed_problem with single-qubit chains reproduces the logical problem") {
    const QuboProblem q = random_complete_qubo(4, 5);
    const ChimeraGraph g = build_chimera(1);
    Embedding emb;
    emb.chains = {{0}, {1}, {4}, {5}}; // K_{2,2}-ish corner of the cell... vars 0,1 on shore 0
    // complete graph on 4 vars needs couplers between (0,1) and (4,5) too; use
    // a problem with only cross-shore couplings instead
    QuboProblem cross;
    cross.num_vars = 4;
    cross.set_linear(0, 0.5);
    cross.set_linear(3, -0.25);
    cross.set_quadratic(0, 2, 1.0);
    cross.set_quadratic(1, 3, -1.0);
    const EmbeddedProblem layout = embed_problem(cross, g, emb, 2.0);
    CHECK(layout.physical.num_vars == 4);
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        Assignment a(4);
        for (int i = 0; i < 4; ++i) a[i] = (mask >> i) & 1;
        CHECK(energy(layout.physical, a) == doctest::Approx(energy(cross, a)).epsilon(1e-12));
    }
    (void)q;
}

TEST_CASE("a strongly bound 2-qubit chain acts as one logical variable") {
    QuboProblem q;
    q.num_vars = 1;
    q.set_linear(0, 1.0);
    const ChimeraGraph g = build_chimera(1);
    Embedding emb;
    emb.chains = {{0, 4}};
    const EmbeddedProblem layout = embed_problem(q, g, emb, 10.0);
    const SampleSet s = brute_force_solve(layout.physical);
    // both optima are chain consistent; h=1 prefers the all-zero chain
    CHECK(s.best().assignment == Assignment{0, 0});
    CHECK(s.best().energy == doctest::Approx(0.0));
    // chain-consistent assignments reproduce logical energies exactly
    CHECK(energy(layout.physical, {1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("chain-consistent physical energies equal logical energies on 2-qubit chains") {
    const QuboProblem q = random_complete_qubo(6, 9);
    const ChimeraGraph g = build_chimera(3);
    const Embedding full = clique_embed(g); // 13 chains; take 6 regular ones
    Embedding emb;
    emb.chains.assign(full.chains.begin(), full.chains.begin() + 6);
    const EmbeddedProblem layout = embed_problem(q, g, emb, 1.5);

    for (std::uint64_t mask = 0; mask < 64; ++mask) {
        Assignment logical(6);
        for (int i = 0; i < 6; ++i) logical[i] = (mask >> i) & 1;
        Assignment physical(layout.physical.num_vars, 0);
        for (std::size_t v = 0; v < 6; ++v)
            for (int p : layout.chain_vars[v]) physical[static_cast<std::size_t>(p)] = logical[v];
        CHECK(energy(layout.physical, physical) ==
              doctest::Approx(energy(q, logical)).epsilon(1e-9));
    }
}

TEST_CASE("unembed: unanimity, majority, and seeded ties") {
    QuboProblem q;
    q.num_vars = 2;
    q.set_quadratic(0, 1, 1.0);
    const ChimeraGraph g = build_chimera(2);
    Embedding emb;
    emb.chains = {{g.qubit_id(0, 0, 0, 0), g.qubit_id(0, 0, 1, 0), g.qubit_id(0, 1, 1, 0)},
                  {g.qubit_id(0, 0, 0, 1), g.qubit_id(1, 0, 0, 1)}};
    const EmbeddedProblem layout = embed_problem(q, g, emb, 1.0);
    REQUIRE(layout.physical.num_vars == 5);

    // chain 0 occupies physical vars for its 3 qubits; find positions
    Assignment phys(5, 0);
    for (int p : layout.chain_vars[0]) phys[static_cast<std::size_t>(p)] = 1;
    UnembedResult u = unembed(phys, layout, 1);
    CHECK(u.logical == Assignment{1, 0});
    CHECK(u.break_fraction == 0.0);

    // break one qubit of chain 0: majority still 1, chain counted broken
    phys[static_cast<std::size_t>(layout.chain_vars[0][2])] = 0;
    u = unembed(phys, layout, 1);
    CHECK(u.logical[0] == 1);
    CHECK(u.break_fraction == doctest::Approx(0.5));

    // tie on chain 1 resolves reproducibly for a fixed seed
    Assignment tied(5, 0);
    tied[static_cast<std::size_t>(layout.chain_vars[1][0])] = 1;
    const UnembedResult t1 = unembed(tied, layout, 42);
    const UnembedResult t2 = unembed(tied, layout, 42);
    CHECK(t1.logical == t2.logical);
    CHECK(t1.break_fraction == doctest::Approx(0.5));
}

TEST_CASE("embed then unembed is the identity on chain-consistent assignments") {
    const QuboProblem q = random_complete_qubo(5, 13);
    const ChimeraGraph g = build_chimera(2);
    const Embedding full = clique_embed(g);
    Embedding emb;
    emb.chains.assign(full.chains.begin(), full.chains.begin() + 5);
    const EmbeddedProblem layout = embed_problem(q, g, emb, 1.0);
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
        Assignment logical(5);
        for (int i = 0; i < 5; ++i) logical[i] = (mask >> i) & 1;
        Assignment physical(layout.physical.num_vars, 0);
        for (std::size_t v = 0; v < 5; ++v)
            for (int p : layout.chain_vars[v]) physical[static_cast<std::size_t>(p)] = logical[v];
        const UnembedResult u = unembed(physical, layout, 0);
        CHECK(u.logical == logical);
        CHECK(u.break_fraction == 0.0);
    }
}

TEST_CASE("hardware model with ICE off and strong chains matches brute force") {
    const QuboProblem q = random_complete_qubo(2, 21);
    const ChimeraGraph g = build_chimera(1);
    Embedding emb;
    emb.chains = {{0, 4}, {1, 5}};
    IceModel ice;
    ice.noise_std_fraction = 0.0;
    SolverConfig cfg;
    cfg.kind = SolverKind::brute_force;
    const HardwareResult hw = solve_hardware_model(q, g, emb, 4.0, ice, cfg);
    const SampleSet bf = brute_force_solve(q);
    CHECK(hw.logical.best().energy == doctest::Approx(bf.best().energy).epsilon(1e-9));
}

TEST_CASE("zero chain strength produces chain breaks on random instances") {
    const QuboProblem q = random_complete_qubo(6, 33);
    const ChimeraGraph g = build_chimera(2);
    const Embedding full = clique_embed(g);
    Embedding emb;
    emb.chains.assign(full.chains.begin(), full.chains.begin() + 6);
    IceModel ice;
    SolverConfig cfg;
    cfg.num_reads = 32;
    cfg.sweeps_per_read = 64;
    cfg.seed = 7;
    const HardwareResult hw = solve_hardware_model(q, g, emb, 0.0, ice, cfg);
    CHECK(hw.mean_chain_break_fraction > 0.0);
}

TEST_CASE("sweep on single-qubit chains selects the grid minimum") {
    QuboProblem q;
    q.num_vars = 2;
    q.set_linear(0, 1.0);
    q.set_linear(1, -1.0);
    q.set_quadratic(0, 1, 2.0);
    const ChimeraGraph g = build_chimera(1);
    Embedding emb;
    emb.chains = {{0}, {4}};
    IceModel ice;
    ice.noise_std_fraction = 0.0;
    SolverConfig cfg;
    cfg.kind = SolverKind::brute_force;
    const SweepResult sweep = chain_strength_sweep(q, g, emb, {0.25, 1.0, 4.0}, ice, cfg);
    REQUIRE(sweep.chain_strength.has_value());
    CHECK(*sweep.chain_strength == doctest::Approx(0.25));
}

TEST_CASE("sweep over a fully connected 8-var problem on C2 recovers the optimum") {
    const QuboProblem q = random_complete_qubo(8, 55);
    const ChimeraGraph g = build_chimera(2);
    const Embedding full = clique_embed(g);
    Embedding emb;
    emb.chains.assign(full.chains.begin(), full.chains.begin() + 8);
    IceModel ice;
    ice.noise_std_fraction = 0.0;
    SolverConfig cfg;
    cfg.num_reads = 48;
    cfg.sweeps_per_read = 384;
    cfg.seed = 3;
    const SweepResult sweep = chain_strength_sweep(q, g, emb, {0.5, 1.0, 2.0, 4.0}, ice, cfg);
    REQUIRE(sweep.chain_strength.has_value());
    const SampleSet bf = brute_force_solve(q);
    CHECK(sweep.best.logical.best().energy == doctest::Approx(bf.best().energy).epsilon(1e-9));
}

TEST_CASE("embedding JSON round trip") {
    const Embedding emb = clique_embed(build_chimera(2));
    const Embedding back = embedding_from_json(embedding_to_json(emb));
    CHECK(back.chains == emb.chains);
}

TEST_CASE("a zero-only chain strength grid is exhausted or badly broken") {
    const QuboProblem q = random_complete_qubo(6, 71);
    const ChimeraGraph g = build_chimera(2);
    const Embedding full = clique_embed(g);
    Embedding emb;
    emb.chains.assign(full.chains.begin(), full.chains.begin() + 6);
    IceModel ice;
    SolverConfig cfg;
    cfg.num_reads = 16;
    cfg.sweeps_per_read = 64;
    cfg.seed = 4;
    const SweepResult sweep = chain_strength_sweep(q, g, emb, {0.0}, ice, cfg);
    if (sweep.chain_strength.has_value())
        CHECK(sweep.diagnostics.front().best_break_fraction > 0.0);
    else
        CHECK(sweep.diagnostics.front().best_break_fraction > 0.05);
}

TEST_CASE("hardware model with ICE off and swept chains recovers brute force optima") {
    const ChimeraGraph g = build_chimera(4);
    const Embedding full = clique_embed(g);
    IceModel ice;
    ice.noise_std_fraction = 0.0;
    int matched = 0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
        const QuboProblem q = random_complete_qubo(10, 500 + t);
        Embedding emb;
        emb.chains.assign(full.chains.begin(), full.chains.begin() + 10);
        SolverConfig cfg;
        cfg.num_reads = 48;
        cfg.sweeps_per_read = 256;
        cfg.seed = 100 + t;
        const SweepResult sweep = chain_strength_sweep(q, g, emb, {0.5, 1.0, 2.0, 4.0}, ice, cfg);
        if (!sweep.chain_strength) continue;
        const SampleSet bf = brute_force_solve(q);
        if (std::abs(sweep.best.logical.best().energy - bf.best().energy) <= 1e-9) ++matched;
    }
    CHECK(matched >= 9); // >= 90% of trials
}
