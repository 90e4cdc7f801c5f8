#include <doctest.h>

#include <cmath>

#include "dzo/error.hpp"
#include "dzo/network.hpp"

using namespace dzo;

namespace {

void check_doubly_stochastic(const Eigen::MatrixXd& W) {
  const Eigen::Index n = W.rows();
  CHECK((W - W.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(std::abs(W.row(i).sum() - 1.0) < 1e-12);
    CHECK(std::abs(W.col(i).sum() - 1.0) < 1e-12);
  }
  CHECK(W.minCoeff() >= 0.0);
}

}  // namespace

TEST_CASE("topology families") {
  const GraphTopology ring = build_topology(GraphKind::Ring, 4, std::nullopt, 0);
  const std::vector<std::pair<int, int>> ring_edges = {{0, 1}, {0, 3}, {1, 2}, {2, 3}};
  CHECK(ring.edges == ring_edges);

  const GraphTopology k3 = build_topology(GraphKind::Complete, 3, std::nullopt, 0);
  CHECK(k3.edges.size() == 3);
  CHECK(k3.is_complete());

  const GraphTopology path = build_topology(GraphKind::Path, 3, std::nullopt, 0);
  CHECK(path.degrees() == std::vector<int>{1, 2, 1});
  CHECK(path.has_edge(1, 0));
  CHECK_FALSE(path.has_edge(0, 2));

  const GraphTopology grid = build_topology(GraphKind::Grid, 9, std::nullopt, 0);
  CHECK(grid.edges.size() == 12);
  CHECK_THROWS_AS(build_topology(GraphKind::Grid, 8, std::nullopt, 0), Error);
}

TEST_CASE("Erdos-Renyi graphs are connected and reproducible") {
  const GraphTopology a = build_topology(GraphKind::ErdosRenyi, 12, 0.3, 99);
  const GraphTopology b = build_topology(GraphKind::ErdosRenyi, 12, 0.3, 99);
  CHECK(a.edges == b.edges);
  CHECK(is_connected(a.n, a.edges));
  try {
    build_topology(GraphKind::ErdosRenyi, 30, 0.01, 1);
    FAIL("expected a connectivity error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Connectivity);
  }
}

TEST_CASE("Metropolis weights: path, ring, complete") {
  const MixingMatrix path = metropolis_matrix(build_topology(GraphKind::Path, 3, std::nullopt, 0));
  Eigen::Matrix3d expect;
  expect << 0.75, 0.25, 0, 0.25, 0.5, 0.25, 0, 0.25, 0.75;
  CHECK((path.W - expect).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(path.rho == doctest::Approx(0.75).epsilon(1e-12));

  const MixingMatrix ring = metropolis_matrix(build_topology(GraphKind::Ring, 4, std::nullopt, 0));
  for (int i = 0; i < 4; ++i) {
    CHECK(ring.W(i, i) == 0.5);
    CHECK(ring.W(i, (i + 1) % 4) == 0.25);
    CHECK(ring.W(i, (i + 2) % 4) == 0.0);
  }
  CHECK(ring.rho == doctest::Approx(0.5).epsilon(1e-12));

  const MixingMatrix k5 = metropolis_matrix(build_topology(GraphKind::Complete, 5, std::nullopt, 0));
  CHECK((k5.W.array() == 0.2).all());
  CHECK(k5.rho == 0.0);
}

TEST_CASE("spectral gaps against numpy eigenvalues") {
  const MixingMatrix ring5 = metropolis_matrix(build_topology(GraphKind::Ring, 5, std::nullopt, 0));
  CHECK(ring5.rho == doctest::Approx(0.6545084971874738).epsilon(1e-12));
  const MixingMatrix grid9 = metropolis_matrix(build_topology(GraphKind::Grid, 9, std::nullopt, 0));
  CHECK(grid9.rho == doctest::Approx(0.8480145814733256).epsilon(1e-12));
  CHECK(grid9.W(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(grid9.W(0, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(grid9.W(4, 4) == doctest::Approx(0.5));
  GraphTopology star;
  star.kind = GraphKind::Path;
  star.n = 4;
  star.edges = {{0, 1}, {0, 2}, {0, 3}};
  const MixingMatrix s = metropolis_matrix(star);
  CHECK(s.rho == doctest::Approx(0.8333333333333334).epsilon(1e-12));
}

TEST_CASE("every family is doubly stochastic, sparse on E, and under the rho bound") {
  for (GraphKind kind : {GraphKind::Ring, GraphKind::Path}) {
    for (int n : {3, 7, 20}) {
      const GraphTopology g = build_topology(kind, n, std::nullopt, 0);
      const MixingMatrix m = metropolis_matrix(g);
      check_doubly_stochastic(m.W);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) CHECK((m.W(i, j) != 0.0) == g.has_edge(i, j));
      CHECK(m.rho < rho_upper_bound(n));
    }
  }
}

TEST_CASE("graph kind names round trip") {
  for (GraphKind k : {GraphKind::Complete, GraphKind::Ring, GraphKind::Path, GraphKind::Grid,
                      GraphKind::ErdosRenyi}) {
    CHECK(parse_graph_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_graph_kind("torus"), Error);
}
