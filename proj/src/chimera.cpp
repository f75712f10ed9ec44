#include "qboost/chimera.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "qboost/rng.hpp"

namespace qboost {

namespace {
std::pair<int, int> canon(int u, int v) { return u < v ? std::pair{u, v} : std::pair{v, u}; }
} // namespace

ChimeraGraph::ChimeraGraph(int m, std::set<int> defective_qubits,
                           std::set<std::pair<int, int>> defective_couplers)
    : m_(m), defective_qubits_(std::move(defective_qubits)) {
    if (m < 1) throw std::invalid_argument("chimera grid size must be >= 1");
    const int total = total_sites();
    for (int q : defective_qubits_)
        if (q < 0 || q >= total)
            throw std::invalid_argument("defective qubit index " + std::to_string(q) + " out of range");
    for (auto [u, v] : defective_couplers) {
        if (u < 0 || u >= total || v < 0 || v >= total)
            throw std::invalid_argument("defective coupler endpoint out of range");
        defective_couplers_.insert(canon(u, v));
    }
    num_intact_ = total - static_cast<int>(defective_qubits_.size());

    adjacency_.assign(total, {});
    auto add_edge = [&](int u, int v) {
        if (!qubit_ok(u) || !qubit_ok(v)) return;
        if (defective_couplers_.count(canon(u, v))) return;
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    };
    for (int r = 0; r < m_; ++r)
        for (int c = 0; c < m_; ++c) {
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    add_edge(qubit_id(r, c, 0, i), qubit_id(r, c, 1, j));
            if (r + 1 < m_)
                for (int k = 0; k < 4; ++k)
                    add_edge(qubit_id(r, c, 0, k), qubit_id(r + 1, c, 0, k));
            if (c + 1 < m_)
                for (int k = 0; k < 4; ++k)
                    add_edge(qubit_id(r, c, 1, k), qubit_id(r, c + 1, 1, k));
        }
    for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool ChimeraGraph::qubit_ok(int q) const {
    return q >= 0 && q < total_sites() && !defective_qubits_.count(q);
}

bool ChimeraGraph::edge_exists(int u, int v) const {
    if (!qubit_ok(u) || !qubit_ok(v)) return false;
    const auto& nb = adjacency_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::pair<int, int>> ChimeraGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < total_sites(); ++u)
        for (int v : adjacency_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::size_t ChimeraGraph::num_edges() const {
    std::size_t deg = 0;
    for (const auto& nb : adjacency_) deg += nb.size();
    return deg / 2;
}

int ChimeraGraph::qubit_id(int row, int col, int shore, int k) const {
    return 8 * (row * m_ + col) + 4 * shore + k;
}

QubitCoord ChimeraGraph::coord(int q) const {
    QubitCoord c;
    c.k = q % 4;
    c.shore = (q / 4) % 2;
    const int cell = q / 8;
    c.col = cell % m_;
    c.row = cell / m_;
    return c;
}

ChimeraGraph build_chimera(int m, std::set<int> defective_qubits,
                           std::set<std::pair<int, int>> defective_couplers) {
    return ChimeraGraph(m, std::move(defective_qubits), std::move(defective_couplers));
}

ChimeraGraph build_chimera_random_defects(int m, int num_defects, std::uint64_t seed) {
    const int total = 8 * m * m;
    if (num_defects < 0 || num_defects > total)
        throw std::invalid_argument("num_defects out of range");
    std::vector<int> ids(total);
    std::iota(ids.begin(), ids.end(), 0);
    std::mt19937_64 eng = make_engine(seed);
    std::shuffle(ids.begin(), ids.end(), eng);
    return ChimeraGraph(m, std::set<int>(ids.begin(), ids.begin() + num_defects));
}

std::string chimera_to_json(const ChimeraGraph& g) {
    nlohmann::json j;
    j["m"] = g.m();
    j["defective_qubits"] = g.defective_qubits();
    j["defective_couplers"] = nlohmann::json::array();
    for (auto [u, v] : g.defective_couplers()) j["defective_couplers"].push_back({u, v});
    return j.dump();
}

ChimeraGraph chimera_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::set<int> dq;
    for (int q : j.value("defective_qubits", std::vector<int>{})) dq.insert(q);
    std::set<std::pair<int, int>> dc;
    if (j.contains("defective_couplers"))
        for (const auto& e : j["defective_couplers"])
            dc.insert(std::make_pair(e.at(0).get<int>(), e.at(1).get<int>()));
    return ChimeraGraph(j.at("m").get<int>(), std::move(dq), std::move(dc));
}

} // namespace qboost
