#include "qboost/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qboost/rng.hpp"

namespace qboost {

ProblemGraph ProblemGraph::from_qubo(const QuboProblem& q) {
    ProblemGraph g;
    g.num_vars = q.num_vars;
    for (const auto& [key, v] : q.quadratic)
        if (v != 0.0) g.edges.push_back(key);
    return g;
}

ProblemGraph ProblemGraph::complete(std::size_t n) {
    ProblemGraph g;
    g.num_vars = n;
    for (VarIndex i = 0; i < n; ++i)
        for (VarIndex j = i + 1; j < n; ++j) g.edges.push_back({i, j});
    return g;
}

std::size_t Embedding::total_qubits() const {
    std::size_t t = 0;
    for (const auto& c : chains) t += c.size();
    return t;
}

std::size_t Embedding::max_chain_length() const {
    std::size_t t = 0;
    for (const auto& c : chains) t = std::max(t, c.size());
    return t;
}

std::string embedding_to_json(const Embedding& e) {
    nlohmann::json j;
    j["chains"] = nlohmann::json::object();
    for (std::size_t v = 0; v < e.chains.size(); ++v) j["chains"][std::to_string(v)] = e.chains[v];
    return j.dump();
}

Embedding embedding_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const auto& chains = j.at("chains");
    Embedding e;
    e.chains.resize(chains.size());
    for (const auto& [k, v] : chains.items()) {
        std::size_t idx = std::stoul(k);
        if (idx >= e.chains.size()) throw std::invalid_argument("non-contiguous chain keys in embedding JSON");
        e.chains[idx] = v.get<std::vector<int>>();
        std::sort(e.chains[idx].begin(), e.chains[idx].end());
    }
    return e;
}

std::string VerifyReport::to_string() const {
    if (ok) return "ok";
    std::ostringstream os;
    os << violations.size() << " violation(s):";
    for (const auto& v : violations) os << "\n  " << v.detail;
    return os.str();
}

namespace {

bool chain_connected(const std::vector<int>& chain, const ChimeraGraph& hw) {
    if (chain.empty()) return false;
    std::set<int> members(chain.begin(), chain.end());
    std::vector<int> stack{chain.front()};
    std::set<int> seen{chain.front()};
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        if (!hw.qubit_ok(q)) continue;
        for (int nb : hw.neighbors(q))
            if (members.count(nb) && !seen.count(nb)) {
                seen.insert(nb);
                stack.push_back(nb);
            }
    }
    return seen.size() == members.size();
}

bool chains_coupled(const std::vector<int>& a, const std::vector<int>& b, const ChimeraGraph& hw) {
    for (int p : a)
        for (int q : b)
            if (hw.edge_exists(p, q)) return true;
    return false;
}

} // namespace

VerifyReport verify_embedding(const ProblemGraph& problem, const ChimeraGraph& hardware,
                              const Embedding& emb) {
    VerifyReport rep;
    auto add = [&rep](Violation::Kind kind, std::string detail) {
        rep.ok = false;
        rep.violations.push_back({kind, std::move(detail)});
    };

    if (emb.chains.size() != problem.num_vars)
        add(Violation::Kind::empty_chain,
            "embedding has " + std::to_string(emb.chains.size()) + " chains for " +
                std::to_string(problem.num_vars) + " problem variables");

    const std::size_t n = std::min(emb.chains.size(), problem.num_vars);
    std::map<int, std::size_t> owner;
    for (std::size_t v = 0; v < n; ++v) {
        const auto& chain = emb.chains[v];
        if (chain.empty()) {
            add(Violation::Kind::empty_chain, "chain " + std::to_string(v) + " is empty");
            continue;
        }
        for (int q : chain) {
            if (!hardware.qubit_ok(q))
                add(Violation::Kind::missing_qubit,
                    "chain " + std::to_string(v) + " uses missing/defective qubit " + std::to_string(q));
            auto [it, inserted] = owner.emplace(q, v);
            if (!inserted)
                add(Violation::Kind::overlapping_chains,
                    "qubit " + std::to_string(q) + " shared by chains " +
                        std::to_string(it->second) + " and " + std::to_string(v));
        }
        if (!chain_connected(chain, hardware))
            add(Violation::Kind::disconnected_chain, "chain " + std::to_string(v) + " is not connected");
    }

    for (const auto& [u, v] : problem.edges) {
        if (u >= n || v >= n) continue;
        if (!chains_coupled(emb.chains[u], emb.chains[v], hardware))
            add(Violation::Kind::missing_coupler,
                "no physical coupler realizes problem edge (" + std::to_string(u) + "," +
                    std::to_string(v) + ")");
    }
    return rep;
}

Embedding clique_embed(const ChimeraGraph& graph) {
    if (!graph.perfect())
        throw std::invalid_argument(
            "clique_embed requires a defect-free graph; use heuristic_embed for defective hardware");
    const int m = graph.m();
    Embedding emb;

    if (m == 1) {
        // K_5 in a single K_{4,4} cell: three two-qubit chains plus the two
        // shores of the fourth index split into singleton chains.
        for (int k = 0; k < 3; ++k)
            emb.chains.push_back({graph.qubit_id(0, 0, 0, k), graph.qubit_id(0, 0, 1, k)});
        emb.chains.push_back({graph.qubit_id(0, 0, 0, 3)});
        emb.chains.push_back({graph.qubit_id(0, 0, 1, 3)});
        return emb;
    }

    // Regular chains: variable (a,k) owns the row-a horizontal qubits of
    // index k in columns 0..a and the column-a vertical qubits of index k in
    // rows a..m-1, joined in diagonal cell (a,a).
    for (int a = 0; a < m; ++a)
        for (int k = 0; k < 4; ++k) {
            std::vector<int> chain;
            for (int c = 0; c <= a; ++c) chain.push_back(graph.qubit_id(a, c, 1, k));
            for (int r = a; r < m; ++r) chain.push_back(graph.qubit_id(r, a, 0, k));
            std::sort(chain.begin(), chain.end());
            emb.chains.push_back(std::move(chain));
        }

    // Collector chain along the superdiagonal cells (a, a+1). Its horizontal
    // qubits sit one cell to the right of each diagonal corner (reaching the
    // row-a chains over row couplers), and the vertical qubits of the last
    // superdiagonal cell reach the row-(m-1) chains over column couplers.
    std::vector<int> collector;
    for (int a = 0; a <= m - 2; ++a) {
        for (int k = 0; k < 4; ++k) collector.push_back(graph.qubit_id(a, a + 1, 1, k));
        if (a == m - 2)
            for (int k = 0; k < 4; ++k) collector.push_back(graph.qubit_id(a, a + 1, 0, k));
        else
            collector.push_back(graph.qubit_id(a, a + 1, 0, 0)); // in-cell hub
    }
    for (int a = 0; a <= m - 3; ++a) {
        // bridge from cell (a,a+1) to (a+1,a+2) through the free cell (a,a+2)
        collector.push_back(graph.qubit_id(a, a + 2, 1, 0));
        collector.push_back(graph.qubit_id(a, a + 2, 0, 0));
    }
    std::sort(collector.begin(), collector.end());
    emb.chains.push_back(std::move(collector));
    return emb;
}

namespace {

// Chain growth in the Cai-Macready-Roy style, with the usual negotiated-
// congestion refinements: qubits may be transiently shared during search;
// reuse costs grow exponentially with current usage and accumulate a history
// penalty over rounds; per-route random jitter breaks path ties; refinement
// rounds rip up and reroute only chains sitting on contested qubits.
class ChainGrowth {
public:
    ChainGrowth(const ProblemGraph& pg, const ChimeraGraph& hw, std::uint64_t seed)
        : pg_(pg), hw_(hw), total_(hw.total_sites()), eng_(make_engine(seed)) {
        var_neighbors_.resize(pg.num_vars);
        for (const auto& [u, v] : pg.edges) {
            var_neighbors_[u].push_back(static_cast<int>(v));
            var_neighbors_[v].push_back(static_cast<int>(u));
        }
        for (auto& nb : var_neighbors_) {
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        }
        chains_.resize(pg.num_vars);
        usage_.assign(total_, 0);
        history_.assign(total_, 0.0);
        jitter_.assign(total_, 1.0);
    }

    // Install precomputed disjoint chains for variables [0, initial.size()).
    void seed_chains(const std::vector<std::vector<int>>& initial) {
        for (std::size_t v = 0; v < initial.size() && v < chains_.size(); ++v) {
            chains_[v] = initial[v];
            for (int q : chains_[v]) ++usage_[q];
        }
    }

    std::optional<Embedding> run(int rounds) {
        std::vector<int> order(pg_.num_vars);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), eng_);
        for (int u : order)
            if (chains_[u].empty() && !route_var(u)) return std::nullopt;

        for (int round = 0; round < rounds && overfilled(); ++round) {
            std::shuffle(order.begin(), order.end(), eng_);
            for (int u : order) {
                bool contested = false;
                for (int q : chains_[u])
                    if (usage_[q] > 1) {
                        contested = true;
                        break;
                    }
                if (!contested) continue;
                clear_var(u);
                if (!route_var(u)) return std::nullopt;
            }
            for (int q = 0; q < total_; ++q)
                if (usage_[q] > 1) history_[q] += 1.0;
        }
        if (overfilled()) return std::nullopt;
        trim();
        Embedding emb;
        emb.chains = chains_;
        for (auto& c : emb.chains) std::sort(c.begin(), c.end());
        return emb;
    }

private:
    static constexpr double kPenaltyBase = 8.0;
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    bool overfilled() const {
        return std::any_of(usage_.begin(), usage_.end(), [](int u) { return u > 1; });
    }

    double cost(int q) const {
        return (1.0 + history_[q]) * std::pow(kPenaltyBase, std::min(usage_[q], 12)) * jitter_[q];
    }

    void refresh_jitter() {
        std::uniform_real_distribution<double> u(1.0, 1.25);
        for (double& j : jitter_) j = u(eng_);
    }

    void clear_var(int u) {
        for (int q : chains_[u]) --usage_[q];
        chains_[u].clear();
    }

    void adopt(int u, const std::set<int>& qubits) {
        chains_[u].assign(qubits.begin(), qubits.end());
        for (int q : chains_[u]) ++usage_[q];
    }

    // Vertex-weighted Dijkstra from every qubit of `sources` (their own cost
    // excluded); dist includes the cost of the reached qubit.
    void dijkstra(const std::vector<int>& sources, std::vector<double>& dist,
                  std::vector<int>& parent) const {
        dist.assign(total_, kInf);
        parent.assign(total_, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        for (int s : sources) {
            dist[s] = 0.0;
            heap.push({0.0, s});
        }
        while (!heap.empty()) {
            auto [d, q] = heap.top();
            heap.pop();
            if (d > dist[q]) continue;
            for (int nb : hw_.neighbors(q)) {
                const double nd = d + cost(nb);
                if (nd < dist[nb]) {
                    dist[nb] = nd;
                    parent[nb] = q;
                    heap.push({nd, nb});
                }
            }
        }
    }

    bool route_var(int u) {
        refresh_jitter();
        std::vector<int> embedded;
        for (int v : var_neighbors_[u])
            if (!chains_[v].empty()) embedded.push_back(v);

        std::set<int> chain;
        if (embedded.empty()) {
            int best = -1, best_usage = std::numeric_limits<int>::max(), count = 0;
            for (int q = 0; q < total_; ++q) {
                if (!hw_.qubit_ok(q)) continue;
                if (usage_[q] < best_usage) {
                    best_usage = usage_[q];
                    best = q;
                    count = 1;
                } else if (usage_[q] == best_usage) {
                    // reservoir-sample among minimal-usage qubits
                    ++count;
                    if (std::uniform_int_distribution<int>(0, count - 1)(eng_) == 0) best = q;
                }
            }
            if (best < 0) return false;
            chain.insert(best);
            adopt(u, chain);
            return true;
        }

        std::vector<std::vector<double>> dists(embedded.size());
        std::vector<std::vector<int>> parents(embedded.size());
        for (std::size_t i = 0; i < embedded.size(); ++i)
            dijkstra(chains_[embedded[i]], dists[i], parents[i]);

        int root = -1;
        double best_score = kInf;
        for (int q = 0; q < total_; ++q) {
            if (!hw_.qubit_ok(q)) continue;
            double score = cost(q); // roots on already-used qubits pay their reuse penalty
            for (const auto& d : dists)
                score += d[q];
            if (score < best_score) {
                best_score = score;
                root = q;
            }
        }
        if (root < 0 || !std::isfinite(best_score)) return false;

        chain.insert(root);
        // nearest neighbors first; each later path departs from the closest
        // qubit of the chain grown so far rather than from the root
        std::vector<std::size_t> nb_order(embedded.size());
        std::iota(nb_order.begin(), nb_order.end(), 0);
        std::sort(nb_order.begin(), nb_order.end(), [&](std::size_t a, std::size_t b) {
            return dists[a][root] < dists[b][root];
        });
        for (std::size_t i : nb_order) {
            const std::set<int> source(chains_[embedded[i]].begin(), chains_[embedded[i]].end());
            int attach = root;
            double attach_d = dists[i][root];
            for (int q : chain)
                if (dists[i][q] < attach_d) {
                    attach_d = dists[i][q];
                    attach = q;
                }
            int q = attach;
            while (!source.count(q)) {
                chain.insert(q);
                q = parents[i][q];
                if (q < 0) return false; // unreachable from this neighbor
            }
        }
        adopt(u, chain);
        return true;
    }

    // Remove chain qubits not needed for connectivity or for any problem-edge
    // coupler, most contested first. Used once after the search succeeds.
    void trim_var(int u) {
        auto& chain = chains_[u];
        bool changed = true;
        while (changed && chain.size() > 1) {
            changed = false;
            std::vector<int> order = chain;
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return usage_[a] > usage_[b]; });
            for (int q : order) {
                std::vector<int> reduced;
                for (int c : chain)
                    if (c != q) reduced.push_back(c);
                if (!chain_connected(reduced, hw_)) continue;
                bool covered = true;
                for (int v : var_neighbors_[u])
                    if (!chains_[v].empty() && !chains_coupled(reduced, chains_[v], hw_)) {
                        covered = false;
                        break;
                    }
                if (!covered) continue;
                --usage_[q];
                chain = std::move(reduced);
                changed = true;
                break;
            }
        }
    }

    void trim() {
        for (std::size_t u = 0; u < chains_.size(); ++u) trim_var(static_cast<int>(u));
    }

    const ProblemGraph& pg_;
    const ChimeraGraph& hw_;
    int total_;
    std::vector<std::vector<int>> var_neighbors_;
    std::vector<std::vector<int>> chains_;
    std::vector<int> usage_;
    std::vector<double> history_;
    std::vector<double> jitter_;
    std::mt19937_64 eng_;
};

bool is_complete_graph(const ProblemGraph& pg) {
    if (pg.num_vars < 2) return false;
    std::set<VarPair> edges;
    for (auto [u, v] : pg.edges)
        edges.insert({std::min(u, v), std::max(u, v)});
    return edges.size() == pg.num_vars * (pg.num_vars - 1) / 2;
}

// Intact L-shaped wire chains (row arm in row a over columns 0..a, column arm
// in column a over rows a..m-1) for every diagonal block. Any intact row wire
// of a block can pair with any intact column wire of the same block, and every
// such chain couples to every other one at the crossing cells, so the pairing
// is free. Optionally the grid is traversed flipped, which realigns the
// construction against a different subset of the defects.
std::vector<std::vector<int>> wire_seed_chains(const ChimeraGraph& g, bool flip) {
    const int m = g.m();
    auto rc = [&](int a) { return flip ? m - 1 - a : a; };
    std::vector<std::vector<int>> chains;
    for (int a = 0; a < m; ++a) {
        std::vector<std::vector<int>> h_wires, v_wires;
        for (int k = 0; k < 4; ++k) {
            std::vector<int> wire;
            bool ok = true;
            for (int c = 0; c <= a && ok; ++c) {
                const int q = g.qubit_id(rc(a), rc(c), 1, k);
                if (!g.qubit_ok(q)) ok = false;
                if (ok && c > 0 && !g.edge_exists(g.qubit_id(rc(a), rc(c - 1), 1, k), q)) ok = false;
                wire.push_back(q);
            }
            if (ok) h_wires.push_back(std::move(wire));
            wire.clear();
            ok = true;
            for (int r = a; r < m && ok; ++r) {
                const int q = g.qubit_id(rc(r), rc(a), 0, k);
                if (!g.qubit_ok(q)) ok = false;
                if (ok && r > a && !g.edge_exists(g.qubit_id(rc(r - 1), rc(a), 0, k), q)) ok = false;
                wire.push_back(q);
            }
            if (ok) v_wires.push_back(std::move(wire));
        }
        const std::size_t pairs = std::min(h_wires.size(), v_wires.size());
        for (std::size_t i = 0; i < pairs; ++i) {
            // the arms join at the diagonal cell through an internal coupler
            std::vector<int> chain = h_wires[i];
            chain.insert(chain.end(), v_wires[i].begin(), v_wires[i].end());
            std::sort(chain.begin(), chain.end());
            chains.push_back(std::move(chain));
        }
    }
    return chains;
}

} // namespace

std::optional<Embedding> heuristic_embed(const ProblemGraph& problem, const ChimeraGraph& hardware,
                                         std::uint64_t seed, int max_tries) {
    if (problem.num_vars == 0) return Embedding{};
    if (static_cast<int>(problem.num_vars) > hardware.num_intact_qubits()) return std::nullopt;
    const bool clique = is_complete_graph(problem);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        ChainGrowth search(problem, hardware, mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        if (clique) {
            // structural seed: intact wire chains already form a large clique,
            // leaving the search to route only the remainder
            auto seeds = wire_seed_chains(hardware, attempt % 2 == 1);
            if (seeds.size() > problem.num_vars) seeds.resize(problem.num_vars);
            search.seed_chains(seeds);
        }
        const int rounds = 64 + 8 * static_cast<int>(problem.num_vars);
        if (auto emb = search.run(rounds)) {
            if (verify_embedding(problem, hardware, *emb).ok) return emb;
        }
    }
    return std::nullopt;
}

EmbeddedProblem embed_problem(const QuboProblem& q, const ChimeraGraph& hardware,
                              const Embedding& emb, double chain_strength) {
    const auto report = verify_embedding(ProblemGraph::from_qubo(q), hardware, emb);
    if (!report.ok)
        throw std::invalid_argument("invalid embedding: " + report.to_string());
    if (chain_strength < 0.0) throw std::invalid_argument("chain strength must be >= 0");

    EmbeddedProblem out;
    out.emb = emb;
    out.chain_strength = chain_strength;

    std::map<int, VarIndex> phys_index;
    for (const auto& chain : emb.chains)
        for (int q_id : chain) phys_index.emplace(q_id, 0);
    for (auto& [q_id, idx] : phys_index) {
        idx = static_cast<VarIndex>(out.qubits.size());
        out.qubits.push_back(q_id);
    }

    out.physical.num_vars = out.qubits.size();
    out.physical.offset = q.offset;
    out.chain_vars.resize(emb.chains.size());

    for (std::size_t v = 0; v < emb.chains.size(); ++v) {
        const auto& chain = emb.chains[v];
        const double h_share = q.linear_at(static_cast<VarIndex>(v)) / static_cast<double>(chain.size());
        for (int q_id : chain) {
            const VarIndex p = phys_index.at(q_id);
            out.chain_vars[v].push_back(static_cast<int>(p));
            if (h_share != 0.0) out.physical.add_linear(p, h_share);
        }
        // ferromagnetic binding on every intra-chain coupler, QUBO penalty form
        for (std::size_t i = 0; i < chain.size(); ++i)
            for (std::size_t j = i + 1; j < chain.size(); ++j)
                if (hardware.edge_exists(chain[i], chain[j])) {
                    const VarIndex p = phys_index.at(chain[i]);
                    const VarIndex r = phys_index.at(chain[j]);
                    out.physical.add_quadratic(p, r, -4.0 * chain_strength);
                    out.physical.add_linear(p, 2.0 * chain_strength);
                    out.physical.add_linear(r, 2.0 * chain_strength);
                }
    }

    for (const auto& [key, coupling] : q.quadratic) {
        if (coupling == 0.0) continue;
        const auto& ca = emb.chains[key.first];
        const auto& cb = emb.chains[key.second];
        std::pair<int, int> chosen{-1, -1};
        for (int p : ca)
            for (int r : cb)
                if (hardware.edge_exists(p, r)) {
                    std::pair<int, int> cand{std::min(p, r), std::max(p, r)};
                    if (chosen.first < 0 || cand < chosen) chosen = cand;
                }
        out.physical.add_quadratic(phys_index.at(chosen.first), phys_index.at(chosen.second), coupling);
    }
    out.physical.validate();
    return out;
}

UnembedResult unembed(const Assignment& physical, const EmbeddedProblem& layout,
                      std::uint64_t tie_seed) {
    if (physical.size() != layout.physical.num_vars)
        throw std::invalid_argument("physical assignment length mismatch");
    UnembedResult res;
    res.logical.resize(layout.chain_vars.size());
    std::size_t broken = 0;
    for (std::size_t v = 0; v < layout.chain_vars.size(); ++v) {
        const auto& members = layout.chain_vars[v];
        std::size_t ones = 0;
        for (int p : members) ones += physical[static_cast<std::size_t>(p)];
        if (ones != 0 && ones != members.size()) ++broken;
        if (2 * ones > members.size())
            res.logical[v] = 1;
        else if (2 * ones < members.size())
            res.logical[v] = 0;
        else
            res.logical[v] = seeded_coin(tie_seed, v) ? 1 : 0;
    }
    res.break_fraction = layout.chain_vars.empty()
                             ? 0.0
                             : static_cast<double>(broken) / static_cast<double>(layout.chain_vars.size());
    return res;
}

namespace {

// Devices rescale the programmed problem to fill their coefficient ranges;
// this is what makes the relative ICE noise and quantization meaningful, and
// it is also why oversized chain strengths drown the logical problem.
QuboProblem autoscale_to_device(const QuboProblem& q, const IceModel& ice) {
    double max_h = 0.0, max_j = 0.0;
    for (const auto& [i, v] : q.linear) max_h = std::max(max_h, std::abs(v));
    for (const auto& [key, v] : q.quadratic) max_j = std::max(max_j, std::abs(v));
    double scale = std::numeric_limits<double>::infinity();
    if (max_h > 0.0) scale = std::min(scale, 0.5 * ice.h_full_range / max_h);
    if (max_j > 0.0) scale = std::min(scale, 0.5 * ice.j_full_range / max_j);
    if (!std::isfinite(scale)) return q;
    QuboProblem out = q;
    for (auto& [i, v] : out.linear) v *= scale;
    for (auto& [key, v] : out.quadratic) v *= scale;
    return out;
}

} // namespace

HardwareResult solve_hardware_model(const QuboProblem& q, const ChimeraGraph& graph,
                                    const Embedding& emb, double chain_strength,
                                    const IceModel& ice, const SolverConfig& cfg) {
    cfg.validate();
    ice.validate();
    EmbeddedProblem layout = embed_problem(q, graph, emb, chain_strength);

    QuboProblem programmed = autoscale_to_device(layout.physical, ice);
    if (ice.quantization_step_fraction) {
        const double f = *ice.quantization_step_fraction;
        programmed = quantize_coefficients(programmed, f * ice.h_full_range, f * ice.j_full_range);
    }
    programmed = apply_ice(programmed, ice, mix_seed(cfg.seed, 0xDEADBEEFULL));

    SampleSet phys;
    if (cfg.kind == SolverKind::brute_force)
        phys = brute_force_solve(programmed);
    else
        phys = simulated_anneal(programmed, cfg);

    const std::uint64_t tie_seed = mix_seed(cfg.seed, 0x713BULL);
    HardwareResult out;
    out.chain_strength = chain_strength;
    double weighted_break = 0.0;
    std::uint64_t total_mult = 0;
    std::vector<Sample> logical;
    for (const auto& s : phys.samples) {
        UnembedResult u = unembed(s.assignment, layout, tie_seed);
        const double e = energy(q, u.logical);
        weighted_break += u.break_fraction * s.multiplicity;
        total_mult += s.multiplicity;
        logical.push_back({std::move(u.logical), e, s.multiplicity, u.break_fraction});
    }
    out.mean_chain_break_fraction = total_mult ? weighted_break / static_cast<double>(total_mult) : 0.0;

    std::sort(logical.begin(), logical.end(), [](const Sample& a, const Sample& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        if (a.assignment != b.assignment)
            return std::lexicographical_compare(a.assignment.begin(), a.assignment.end(),
                                                b.assignment.begin(), b.assignment.end());
        return a.chain_break_fraction < b.chain_break_fraction;
    });
    for (auto& s : logical) {
        auto& samples = out.logical.samples;
        if (!samples.empty() && samples.back().assignment == s.assignment &&
            samples.back().energy == s.energy) {
            samples.back().multiplicity += s.multiplicity;
            samples.back().chain_break_fraction =
                std::min(samples.back().chain_break_fraction, s.chain_break_fraction);
        } else {
            samples.push_back(std::move(s));
        }
    }
    return out;
}

SweepResult chain_strength_sweep(const QuboProblem& q, const ChimeraGraph& graph,
                                 const Embedding& emb, const std::vector<double>& alpha_grid,
                                 const IceModel& ice, const SolverConfig& cfg,
                                 double break_threshold) {
    if (alpha_grid.empty()) throw std::invalid_argument("chain strength grid must be nonempty");
    if (!std::is_sorted(alpha_grid.begin(), alpha_grid.end()))
        throw std::invalid_argument("chain strength grid must be ascending");

    SweepResult res;
    std::vector<HardwareResult> results(alpha_grid.size());
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        SolverConfig point_cfg = cfg;
        point_cfg.seed = mix_seed(cfg.seed, i); // independent per grid point
        results[i] = solve_hardware_model(q, graph, emb, alpha_grid[i], ice, point_cfg);
        const Sample& best = results[i].logical.best();
        res.diagnostics.push_back({alpha_grid[i], best.energy, best.chain_break_fraction,
                                   best.chain_break_fraction <= break_threshold});
    }

    double best_energy = std::numeric_limits<double>::infinity();
    for (const auto& p : res.diagnostics)
        if (p.qualified) best_energy = std::min(best_energy, p.best_energy);
    for (std::size_t i = 0; i < res.diagnostics.size(); ++i)
        if (res.diagnostics[i].qualified && res.diagnostics[i].best_energy <= best_energy + 1e-12) {
            res.chain_strength = alpha_grid[i];
            res.best = std::move(results[i]);
            break;
        }
    return res;
}

} // namespace qboost
