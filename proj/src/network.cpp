#include "dzo/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "dzo/error.hpp"
#include "dzo/rand_geometry.hpp"

namespace dzo {

namespace {

void add_edge(std::vector<std::pair<int, int>>& edges, int i, int j) {
  if (i == j) return;
  edges.emplace_back(std::min(i, j), std::max(i, j));
}

void normalize(std::vector<std::pair<int, int>>& edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

}  // namespace

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "complete") return GraphKind::Complete;
  if (name == "ring") return GraphKind::Ring;
  if (name == "path") return GraphKind::Path;
  if (name == "grid") return GraphKind::Grid;
  if (name == "erdos_renyi") return GraphKind::ErdosRenyi;
  throw Error(ErrorKind::Input, "unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) noexcept {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::Ring: return "ring";
    case GraphKind::Path: return "path";
    case GraphKind::Grid: return "grid";
    case GraphKind::ErdosRenyi: return "erdos_renyi";
  }
  return "unknown";
}

std::vector<int> GraphTopology::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [i, j] : edges) {
    ++deg[static_cast<std::size_t>(i)];
    ++deg[static_cast<std::size_t>(j)];
  }
  return deg;
}

bool GraphTopology::has_edge(int i, int j) const {
  const std::pair<int, int> e{std::min(i, j), std::max(i, j)};
  return std::binary_search(edges.begin(), edges.end(), e);
}

bool is_connected(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n <= 1) return true;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  };
  int components = n;
  for (const auto& [i, j] : edges) {
    const int a = find(i), b = find(j);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      --components;
    }
  }
  return components == 1;
}

GraphTopology build_topology(GraphKind kind, int n, std::optional<double> edge_probability,
                             std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::Parameter, "graph needs n >= 1");
  GraphTopology g;
  g.kind = kind;
  g.n = n;
  switch (kind) {
    case GraphKind::Complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add_edge(g.edges, i, j);
      break;
    case GraphKind::Ring:
      for (int i = 0; i < n; ++i) add_edge(g.edges, i, (i + 1) % n);
      break;
    case GraphKind::Path:
      for (int i = 0; i + 1 < n; ++i) add_edge(g.edges, i, i + 1);
      break;
    case GraphKind::Grid: {
      const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
      if (side * side != n) {
        throw Error(ErrorKind::Shape, "grid graph needs a perfect-square n, got " + std::to_string(n));
      }
      for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
          const int v = r * side + c;
          if (c + 1 < side) add_edge(g.edges, v, v + 1);
          if (r + 1 < side) add_edge(g.edges, v, v + side);
        }
      }
      break;
    }
    case GraphKind::ErdosRenyi: {
      const double p = edge_probability.value_or(-1.0);
      if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::Parameter, "erdos_renyi needs edge probability in (0, 1]");
      }
      for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
        RandomStream stream(seed, {Purpose::Graph, static_cast<std::uint64_t>(n), attempt});
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (stream.unit() < p) add_edge(edges, i, j);
        if (is_connected(n, edges)) {
          g.edges = std::move(edges);
          normalize(g.edges);
          return g;
        }
      }
      throw Error(ErrorKind::Connectivity,
                  "erdos_renyi graph still disconnected after 100 draws (n=" + std::to_string(n) +
                      ")");
    }
  }
  normalize(g.edges);
  if (!is_connected(n, g.edges)) {
    throw Error(ErrorKind::Connectivity, "graph is not connected");
  }
  return g;
}

double spectral_gap(const Eigen::MatrixXd& W) {
  const auto n = W.rows();
  if (n != W.cols() || n == 0) throw Error(ErrorKind::Shape, "mixing matrix must be square");
  const Eigen::MatrixXd deflated =
      W - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  if (deflated.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(deflated,
                                                              Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Numerical, "symmetric eigensolver did not converge");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

MixingMatrix metropolis_matrix(const GraphTopology& g) {
  if (!is_connected(g.n, g.edges)) {
    throw Error(ErrorKind::Connectivity, "mixing matrix needs a connected graph");
  }
  const int n = g.n;
  MixingMatrix m;
  if (g.is_complete()) {
    m.W = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    m.rho = 0.0;
    return m;
  }
  const auto deg = g.degrees();
  m.W = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : g.edges) {
    const double w =
        1.0 / (2.0 * std::max(deg[static_cast<std::size_t>(i)], deg[static_cast<std::size_t>(j)]));
    m.W(i, j) = w;
    m.W(j, i) = w;
  }
  for (int i = 0; i < n; ++i) {
    double off = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) off += m.W(i, j);
    m.W(i, i) = 1.0 - off;
  }
  m.rho = spectral_gap(m.W);
  return m;
}

}  // namespace dzo
