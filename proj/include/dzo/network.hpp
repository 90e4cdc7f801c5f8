#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dzo {

enum class GraphKind { Complete, Ring, Path, Grid, ErdosRenyi };

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind) noexcept;

/// Undirected, connected communication graph on nodes 0..n-1.
struct GraphTopology {
  GraphKind kind = GraphKind::Complete;
  int n = 1;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted, no duplicates

  std::vector<int> degrees() const;
  bool has_edge(int i, int j) const;
  bool is_complete() const noexcept {
    return static_cast<long>(edges.size()) == static_cast<long>(n) * (n - 1) / 2;
  }
};

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges);

/// Builds a graph of the requested family. Erdos-Renyi graphs are redrawn
/// (up to 100 times) until connected; the draws come from the Graph purpose
/// stream of `seed`. Grid requires a perfect-square n.
GraphTopology build_topology(GraphKind kind, int n, std::optional<double> edge_probability,
                             std::uint64_t seed);

struct MixingMatrix {
  Eigen::MatrixXd W;
  double rho = 0.0;  // spectral norm of W - (1/n) 1 1^T

  int n() const noexcept { return static_cast<int>(W.rows()); }
};

/// Metropolis weights 1/(2 max{d(i), d(j)}) on edges, remainder on the
/// diagonal; complete graphs get exactly (1/n) 1 1^T.
MixingMatrix metropolis_matrix(const GraphTopology& g);

/// Largest |eigenvalue| of W restricted to the complement of the all-ones
/// direction.
double spectral_gap(const Eigen::MatrixXd& W);

/// The known bound rho < 1 - 1/(71 n^2) for Metropolis weights on connected graphs.
inline double rho_upper_bound(int n) noexcept {
  return 1.0 - 1.0 / (71.0 * static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace dzo
