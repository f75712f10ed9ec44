#pragma once

#include <vector>

namespace qboost {

enum class Penalty { l1, l2 };

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    Penalty penalty = Penalty::l2;
    double lambda = 0.0;
    bool converged = false;
    int iterations = 0;
    double objective = 0.0;
};

// Proximal gradient (ISTA) with backtracking on
//   mean_s log(1 + exp(-y_s (w.x_s + b))) + lambda * Omega(w)
// where Omega is ||w||_1 or ||w||_2^2 / 2; the intercept is unpenalized.
// Convergence: objective decrease below tol. Non-convergence is reported via
// the model flags, with the final objective retained.
LogisticModel logistic_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                           Penalty penalty, double lambda, double tol = 1e-8, int max_iter = 5000);

double logistic_predict_proba(const LogisticModel& model, const std::vector<double>& row);

// Full objective and its smooth-part gradient, exposed so tests can check
// optimality against finite differences.
double logistic_objective(const LogisticModel& model, const std::vector<std::vector<double>>& X,
                          const std::vector<int>& y);

} // namespace qboost
