#include "qboost/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qboost {

namespace {

double softplus(double z) { // log(1 + exp(z)), stable
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
    return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

struct Problem {
    const std::vector<std::vector<double>>& X;
    const std::vector<int>& y;
    Penalty penalty;
    double lambda;

    std::size_t n() const { return X.size(); }
    std::size_t p() const { return X.empty() ? 0 : X.front().size(); }

    double smooth_loss(const std::vector<double>& w, double b) const {
        double loss = 0.0;
        for (std::size_t s = 0; s < n(); ++s) {
            double z = b;
            for (std::size_t f = 0; f < p(); ++f) z += w[f] * X[s][f];
            loss += softplus(-y[s] * z);
        }
        loss /= static_cast<double>(n());
        if (penalty == Penalty::l2)
            for (double wf : w) loss += 0.5 * lambda * wf * wf;
        return loss;
    }

    double full_objective(const std::vector<double>& w, double b) const {
        double obj = smooth_loss(w, b);
        if (penalty == Penalty::l1)
            for (double wf : w) obj += lambda * std::abs(wf);
        return obj;
    }

    // gradient of the smooth part (logistic loss + L2 term when applicable)
    void smooth_grad(const std::vector<double>& w, double b, std::vector<double>& gw,
                     double& gb) const {
        gw.assign(p(), 0.0);
        gb = 0.0;
        for (std::size_t s = 0; s < n(); ++s) {
            double z = b;
            for (std::size_t f = 0; f < p(); ++f) z += w[f] * X[s][f];
            const double coef = -y[s] * sigmoid(-y[s] * z);
            gb += coef;
            for (std::size_t f = 0; f < p(); ++f) gw[f] += coef * X[s][f];
        }
        const double inv_n = 1.0 / static_cast<double>(n());
        gb *= inv_n;
        for (double& g : gw) g *= inv_n;
        if (penalty == Penalty::l2)
            for (std::size_t f = 0; f < p(); ++f) gw[f] += lambda * w[f];
    }
};

double soft_threshold(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

} // namespace

LogisticModel logistic_fit(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                           Penalty penalty, double lambda, double tol, int max_iter) {
    if (X.empty() || X.size() != y.size())
        throw std::invalid_argument("logistic_fit: empty data or size mismatch");
    for (int label : y)
        if (label != 1 && label != -1) throw std::invalid_argument("labels must be -1 or +1");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    for (const auto& row : X) {
        if (row.size() != X.front().size()) throw std::invalid_argument("ragged feature matrix");
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    }

    const Problem prob{X, y, penalty, lambda};
    LogisticModel model;
    model.penalty = penalty;
    model.lambda = lambda;
    model.weights.assign(prob.p(), 0.0);

    double step = 1.0;
    double obj = prob.full_objective(model.weights, model.intercept);
    std::vector<double> gw, w_new(prob.p());

    int it = 0;
    for (; it < max_iter; ++it) {
        double gb;
        prob.smooth_grad(model.weights, model.intercept, gw, gb);

        // backtracking on the smooth majorization
        const double smooth_old = prob.smooth_loss(model.weights, model.intercept);
        double b_new = 0.0;
        for (;;) {
            for (std::size_t f = 0; f < prob.p(); ++f) {
                const double v = model.weights[f] - step * gw[f];
                w_new[f] = penalty == Penalty::l1 ? soft_threshold(v, step * lambda) : v;
            }
            b_new = model.intercept - step * gb;

            double quad = 0.0, lin = 0.0;
            for (std::size_t f = 0; f < prob.p(); ++f) {
                const double d = w_new[f] - model.weights[f];
                lin += gw[f] * d;
                quad += d * d;
            }
            const double db = b_new - model.intercept;
            lin += gb * db;
            quad += db * db;
            if (prob.smooth_loss(w_new, b_new) <= smooth_old + lin + quad / (2.0 * step) + 1e-15)
                break;
            step *= 0.5;
            if (step < 1e-16) break;
        }

        model.weights = w_new;
        model.intercept = b_new;
        const double new_obj = prob.full_objective(model.weights, model.intercept);
        const double decrease = obj - new_obj;
        obj = new_obj;
        if (decrease >= 0.0 && decrease < tol) {
            model.converged = true;
            ++it;
            break;
        }
        step = std::min(step * 2.0, 1e8); // allow the step to recover
    }
    model.iterations = it;
    model.objective = obj;
    return model;
}

double logistic_predict_proba(const LogisticModel& model, const std::vector<double>& row) {
    if (row.size() != model.weights.size())
        throw std::invalid_argument("feature row length does not match model");
    double z = model.intercept;
    for (std::size_t f = 0; f < row.size(); ++f) z += model.weights[f] * row[f];
    return sigmoid(z);
}

double logistic_objective(const LogisticModel& model, const std::vector<std::vector<double>>& X,
                          const std::vector<int>& y) {
    const Problem prob{X, y, model.penalty, model.lambda};
    return prob.full_objective(model.weights, model.intercept);
}

} // namespace qboost
