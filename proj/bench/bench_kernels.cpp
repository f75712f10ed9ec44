// Timing comparison of the OpenMP kernels against their serial reference
// implementations. Also cross-checks that both paths agree, which is the
// contract the unit tests pin down on smaller sizes.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qboost/boosting.hpp"
#include "qboost/forest.hpp"
#include "qboost/solvers.hpp"

using namespace qboost;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

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

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool agree) {
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name, serial_s,
                parallel_s, serial_s / parallel_s, agree ? "outputs match" : "OUTPUTS DIFFER");
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run serial code\n\n");
#endif

    {
        const QuboProblem q = random_problem(22, 1);
        SampleSet ser, par;
        const double ts = time_best_of(2, [&] { ser = serial::brute_force_solve(q); });
        const double tp = time_best_of(2, [&] { par = brute_force_solve(q); });
        report("brute force, 22 vars", ts, tp,
               ser.best().assignment == par.best().assignment && ser.best().energy == par.best().energy);
    }

    {
        const QuboProblem q = random_problem(64, 2);
        SolverConfig cfg;
        cfg.num_reads = 256;
        cfg.sweeps_per_read = 512;
        cfg.seed = 3;
        SampleSet ser, par;
        const double ts = time_best_of(2, [&] { ser = serial::simulated_anneal(q, cfg); });
        const double tp = time_best_of(2, [&] { par = simulated_anneal(q, cfg); });
        bool agree = ser.samples.size() == par.samples.size();
        for (std::size_t i = 0; agree && i < ser.samples.size(); ++i)
            agree = ser.samples[i].assignment == par.samples[i].assignment &&
                    ser.samples[i].multiplicity == par.samples[i].multiplicity;
        report("annealing, 64 vars x 256 reads", ts, tp, agree);
    }

    {
        std::mt19937_64 eng(4);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<std::vector<double>> X;
        std::vector<int> y;
        for (int i = 0; i < 2000; ++i) {
            const int label = (eng() & 1) ? 1 : -1;
            std::vector<double> row(24);
            for (auto& v : row) v = g(eng) + 0.25 * label;
            X.push_back(std::move(row));
            y.push_back(label);
        }
        ForestModel ser, par;
        const double ts = time_best_of(1, [&] { ser = serial::forest_fit(X, y, 200, -1, 0, 7); });
        const double tp = time_best_of(1, [&] { par = forest_fit(X, y, 200, -1, 0, 7); });
        bool agree = true;
        for (int i = 0; i < 50 && agree; ++i)
            agree = forest_predict_proba(ser, X[static_cast<std::size_t>(i)]) ==
                    forest_predict_proba(par, X[static_cast<std::size_t>(i)]);
        report("forest, 200 trees", ts, tp, agree);
    }

    {
        // rqboost resample fan-out with a brute-force oracle
        std::mt19937_64 eng(5);
        LabeledDataset ds;
        std::vector<WeakClassifier> pool;
        const std::size_t rows = 600, members = 14;
        ds.features.assign(rows, std::vector<double>(members));
        ds.labels.resize(rows);
        for (std::size_t s = 0; s < rows; ++s) ds.labels[s] = (eng() & 1) ? 1 : -1;
        for (std::size_t j = 0; j < members; ++j) {
            for (std::size_t s = 0; s < rows; ++s) {
                int v = (eng() & 1) ? 1 : -1;
                if ((eng() % 10) < 3) v = ds.labels[s];
                ds.features[s][j] = v;
            }
            pool.push_back({RawColumn{static_cast<int>(j), 1}, "c" + std::to_string(j)});
        }
        RQBoostConfig cfg;
        cfg.resamples = 12;
        cfg.seed = 6;
        cfg.inner.Q = 7;
        cfg.inner.lambda_grid = {0.0, 0.05};
        cfg.inner.oracle.kind = OracleKind::brute_force;
        ProbabilityModel ser, par;
        const double ts = time_best_of(1, [&] { ser = serial::rqboost_train(pool, ds, cfg); });
        const double tp = time_best_of(1, [&] { par = rqboost_train(pool, ds, cfg); });
        bool agree = ser.ensembles.size() == par.ensembles.size();
        for (std::size_t r = 0; agree && r < ser.ensembles.size(); ++r) {
            agree = ser.ensembles[r].members.size() == par.ensembles[r].members.size();
            for (std::size_t i = 0; agree && i < ser.ensembles[r].members.size(); ++i)
                agree = ser.ensembles[r].members[i].id == par.ensembles[r].members[i].id;
        }
        report("rqboost, 12 resamples", ts, tp, agree);
    }

    return 0;
}
