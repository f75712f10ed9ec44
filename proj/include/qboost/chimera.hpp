#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qboost {

// Coordinates of a qubit in an m x m Chimera graph: cell (row, col), shore 0
// holds the vertically coupled qubits, shore 1 the horizontally coupled ones,
// k indexes the four qubits of a shore.
struct QubitCoord {
    int row = 0, col = 0, shore = 0, k = 0;
};

// m x m grid of 8-qubit unit cells. Each cell is a complete bipartite K_{4,4}
// between its two shores; shore-0 qubits couple to the same k in the cell
// above/below, shore-1 qubits to the same k in the cell left/right. Defective
// qubits and couplers are removed from the edge set.
class ChimeraGraph {
public:
    ChimeraGraph() = default;
    ChimeraGraph(int m, std::set<int> defective_qubits = {},
                 std::set<std::pair<int, int>> defective_couplers = {});

    int m() const { return m_; }
    int total_sites() const { return 8 * m_ * m_; }
    int num_intact_qubits() const { return num_intact_; }
    bool qubit_ok(int q) const;
    bool edge_exists(int u, int v) const;
    bool perfect() const { return defective_qubits_.empty() && defective_couplers_.empty(); }

    const std::vector<int>& neighbors(int q) const { return adjacency_[q]; }
    std::vector<std::pair<int, int>> edges() const;
    std::size_t num_edges() const;

    const std::set<int>& defective_qubits() const { return defective_qubits_; }
    const std::set<std::pair<int, int>>& defective_couplers() const { return defective_couplers_; }

    int qubit_id(int row, int col, int shore, int k) const;
    QubitCoord coord(int q) const;

private:
    int m_ = 0;
    int num_intact_ = 0;
    std::set<int> defective_qubits_;
    std::set<std::pair<int, int>> defective_couplers_;
    std::vector<std::vector<int>> adjacency_;
};

ChimeraGraph build_chimera(int m, std::set<int> defective_qubits = {},
                           std::set<std::pair<int, int>> defective_couplers = {});

// Convenience generator for modeling a partially defective chip: removes
// `num_defects` uniformly random qubits.
ChimeraGraph build_chimera_random_defects(int m, int num_defects, std::uint64_t seed);

std::string chimera_to_json(const ChimeraGraph& g);
ChimeraGraph chimera_from_json(const std::string& text);

} // namespace qboost
