#include "qboost/qubo.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qboost {
namespace detail {

namespace {
VarPair canonical(VarIndex i, VarIndex j) {
    if (i == j) throw std::invalid_argument("quadratic term on diagonal pair (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
    return i < j ? VarPair{i, j} : VarPair{j, i};
}
} // namespace

void CoefficientMap::set_linear(VarIndex i, double value) { linear[i] = value; }

void CoefficientMap::add_linear(VarIndex i, double value) { linear[i] += value; }

void CoefficientMap::set_quadratic(VarIndex i, VarIndex j, double value) {
    quadratic[canonical(i, j)] = value;
}

void CoefficientMap::add_quadratic(VarIndex i, VarIndex j, double value) {
    quadratic[canonical(i, j)] += value;
}

double CoefficientMap::linear_at(VarIndex i) const {
    auto it = linear.find(i);
    return it == linear.end() ? 0.0 : it->second;
}

double CoefficientMap::quadratic_at(VarIndex i, VarIndex j) const {
    auto it = quadratic.find(canonical(i, j));
    return it == quadratic.end() ? 0.0 : it->second;
}

void CoefficientMap::validate() const {
    if (!std::isfinite(offset)) throw std::invalid_argument("offset is not finite");
    for (const auto& [i, v] : linear) {
        if (i >= num_vars) throw std::invalid_argument("linear index " + std::to_string(i) +
                                                       " out of range for " + std::to_string(num_vars) + " vars");
        if (!std::isfinite(v)) throw std::invalid_argument("linear coefficient not finite at " + std::to_string(i));
    }
    for (const auto& [key, v] : quadratic) {
        auto [i, j] = key;
        if (i >= j) throw std::invalid_argument("non-canonical quadratic key");
        if (j >= num_vars) throw std::invalid_argument("quadratic index out of range");
        if (!std::isfinite(v)) throw std::invalid_argument("quadratic coefficient not finite");
    }
}

} // namespace detail

double energy(const QuboProblem& q, const Assignment& a) {
    if (a.size() != q.num_vars)
        throw std::invalid_argument("assignment length " + std::to_string(a.size()) +
                                    " does not match num_vars " + std::to_string(q.num_vars));
    double e = q.offset;
    for (const auto& [i, h] : q.linear)
        if (a[i]) e += h;
    for (const auto& [key, j] : q.quadratic)
        if (a[key.first] && a[key.second]) e += j;
    return e;
}

double ising_energy(const IsingProblem& p, const SpinAssignment& s) {
    if (s.size() != p.num_vars)
        throw std::invalid_argument("spin assignment length does not match num_vars");
    double e = p.offset;
    for (const auto& [i, h] : p.linear) e += h * s[i];
    for (const auto& [key, j] : p.quadratic) e += j * s[key.first] * s[key.second];
    return e;
}

double flip_delta(const QuboProblem& q, const Assignment& a, VarIndex k) {
    if (a.size() != q.num_vars || k >= q.num_vars)
        throw std::invalid_argument("flip_delta: bad assignment length or index");
    double field = q.linear_at(k);
    for (const auto& [key, j] : q.quadratic) {
        if (key.first == k && a[key.second]) field += j;
        else if (key.second == k && a[key.first]) field += j;
    }
    return a[k] ? -field : field;
}

IsingProblem qubo_to_ising(const QuboProblem& q) {
    q.validate();
    IsingProblem p;
    p.num_vars = q.num_vars;
    p.offset = q.offset;
    for (const auto& [i, h] : q.linear) {
        p.add_linear(i, h / 2.0);
        p.offset += h / 2.0;
    }
    for (const auto& [key, j] : q.quadratic) {
        p.add_quadratic(key.first, key.second, j / 4.0);
        p.add_linear(key.first, j / 4.0);
        p.add_linear(key.second, j / 4.0);
        p.offset += j / 4.0;
    }
    return p;
}

QuboProblem ising_to_qubo(const IsingProblem& p) {
    p.validate();
    QuboProblem q;
    q.num_vars = p.num_vars;
    q.offset = p.offset;
    for (const auto& [i, h] : p.linear) {
        q.add_linear(i, 2.0 * h);
        q.offset -= h;
    }
    for (const auto& [key, j] : p.quadratic) {
        q.add_quadratic(key.first, key.second, 4.0 * j);
        q.add_linear(key.first, -2.0 * j);
        q.add_linear(key.second, -2.0 * j);
        q.offset += j;
    }
    return q;
}

SpinAssignment bits_to_spins(const Assignment& a) {
    SpinAssignment s(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] ? 1 : -1;
    return s;
}

Assignment spins_to_bits(const SpinAssignment& s) {
    Assignment a(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) a[i] = s[i] > 0 ? 1 : 0;
    return a;
}

std::string qubo_to_json(const QuboProblem& q) {
    nlohmann::json j;
    j["num_vars"] = q.num_vars;
    j["linear"] = nlohmann::json::object();
    for (const auto& [i, v] : q.linear) j["linear"][std::to_string(i)] = v;
    j["quadratic"] = nlohmann::json::object();
    for (const auto& [key, v] : q.quadratic)
        j["quadratic"][std::to_string(key.first) + "," + std::to_string(key.second)] = v;
    j["offset"] = q.offset;
    return j.dump();
}

QuboProblem qubo_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    QuboProblem q;
    q.num_vars = j.at("num_vars").get<std::size_t>();
    q.offset = j.value("offset", 0.0);
    if (j.contains("linear"))
        for (const auto& [k, v] : j.at("linear").items())
            q.set_linear(static_cast<VarIndex>(std::stoul(k)), v.get<double>());
    if (j.contains("quadratic"))
        for (const auto& [k, v] : j.at("quadratic").items()) {
            auto comma = k.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("quadratic key '" + k + "' is not of the form \"i,j\"");
            VarIndex a = static_cast<VarIndex>(std::stoul(k.substr(0, comma)));
            VarIndex b = static_cast<VarIndex>(std::stoul(k.substr(comma + 1)));
            if (q.quadratic.count({std::min(a, b), std::max(a, b)}))
                throw std::invalid_argument("duplicate quadratic pair in JSON: " + k);
            q.set_quadratic(a, b, v.get<double>());
        }
    q.validate();
    return q;
}

QuboView::QuboView(const QuboProblem& q)
    : num_vars(q.num_vars), h(q.num_vars, 0.0), neighbors(q.num_vars), offset(q.offset) {
    q.validate();
    for (const auto& [i, v] : q.linear) h[i] = v;
    for (const auto& [key, v] : q.quadratic) {
        neighbors[key.first].emplace_back(key.second, v);
        neighbors[key.second].emplace_back(key.first, v);
    }
}

double QuboView::energy(const Assignment& a) const {
    double e = offset;
    for (std::size_t i = 0; i < num_vars; ++i) {
        if (!a[i]) continue;
        e += h[i];
        for (const auto& [j, v] : neighbors[i])
            if (j > i && a[j]) e += v;
    }
    return e;
}

} // namespace qboost
