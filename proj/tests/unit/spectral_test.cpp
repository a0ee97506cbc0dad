#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <numeric>

#include "netiso/generators.hpp"
#include "netiso/spectral.hpp"
#include "support/oracles.hpp"

using namespace netiso;

namespace {

Eigen::MatrixXd dense_matrix(const DirectedGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (auto [i, j] : g.edges()) a(i, j) = 1.0;
  return a;
}

double residual_ratio(const DirectedGraph& g, const std::vector<double>& v, double rho) {
  Eigen::MatrixXd a = dense_matrix(g);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
  return (a.transpose() * x - rho * x).norm() / (rho * x.norm());
}

// Second eigenvector of D^{-1} L from a dense symmetric solve, mapped back
// through D^{-1/2} and normalized.
Eigen::VectorXd dense_fiedler(const DirectedGraph& g, double* lambda2) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd a = dense_matrix(g);
  Eigen::VectorXd isd(n);
  for (Eigen::Index i = 0; i < n; ++i) isd(i) = 1.0 / std::sqrt(static_cast<double>(g.in_degree(i)));
  Eigen::MatrixXd lsym = Eigen::MatrixXd::Identity(n, n) - isd.asDiagonal() * a * isd.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lsym);
  *lambda2 = es.eigenvalues()(1);
  Eigen::VectorXd h = isd.asDiagonal() * es.eigenvectors().col(1);
  return h / h.norm();
}

}  // namespace

TEST(PrincipalEigenvector, CompleteGraphIsUniform) {
  auto r = principal_eigenvector(oracle::complete(6));
  ASSERT_TRUE(r.converged);
  for (double x : r.vector) EXPECT_NEAR(x, 1.0 / std::sqrt(6.0), 1e-10);
  EXPECT_NEAR(r.eigenvalue, 5.0, 1e-9);
}

TEST(PrincipalEigenvector, StarCenterLargest) {
  auto r = principal_eigenvector(oracle::star(7));
  ASSERT_TRUE(r.converged);
  for (std::size_t j = 1; j < r.vector.size(); ++j) EXPECT_GT(r.vector[0], r.vector[j]);
  EXPECT_NEAR(r.eigenvalue, std::sqrt(7.0), 1e-9);
}

TEST(PrincipalEigenvector, PathP3ProportionalToOneRootTwoOne) {
  auto r = principal_eigenvector(oracle::path(3));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.vector[0], 0.5, 1e-10);
  EXPECT_NEAR(r.vector[1], std::sqrt(2.0) / 2.0, 1e-10);
  EXPECT_NEAR(r.vector[2], 0.5, 1e-10);
}

TEST(PrincipalEigenvector, ZeroAdjacencyAndEmptyGraph) {
  auto r = principal_eigenvector(oracle::edgeless(4));
  EXPECT_TRUE(r.zero_adjacency);
  for (double x : r.vector) EXPECT_DOUBLE_EQ(x, 0.5);
  EXPECT_THROW(principal_eigenvector(DirectedGraph{}), std::invalid_argument);
}

TEST(PrincipalEigenvector, ResidualOnGeneratedAndSquaredGraphs) {
  for (auto model : {NetworkModel::BA, NetworkModel::RG, NetworkModel::SW, NetworkModel::ER,
                     NetworkModel::SBM}) {
    auto g = generate(model, 150, {}, 4);
    for (const auto& h : {g, squared_graph(g)}) {
      auto r = principal_eigenvector(h);
      ASSERT_TRUE(r.converged) << to_string(model);
      EXPECT_NEAR(std::sqrt(std::inner_product(r.vector.begin(), r.vector.end(), r.vector.begin(), 0.0)), 1.0, 1e-12);
      for (double x : r.vector) EXPECT_GE(x, 0.0);
      EXPECT_LE(residual_ratio(h, r.vector, r.eigenvalue), 1e-6) << to_string(model);
    }
  }
}

TEST(PrincipalEigenvector, NonConvergedFlagWhenBudgetTiny) {
  auto g = generate(NetworkModel::BA, 200, {}, 2);
  auto r = principal_eigenvector(g, 1e-15, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.vector.size(), g.size());
}

TEST(PrincipalEigenvector, SpectralWeightStableUnderDiagonalShift) {
  // Dropping the diagonal of the squared graph versus keeping it (A^2 with
  // its diagonal) should leave the leading direction nearly unchanged.
  for (auto model : {NetworkModel::BA, NetworkModel::RG, NetworkModel::SW, NetworkModel::ER,
                     NetworkModel::SBM}) {
    auto g = generate(model, 120, {}, 8);
    auto v = principal_eigenvector(squared_graph(g)).vector;
    Eigen::MatrixXd a = dense_matrix(g);
    Eigen::MatrixXd a2 = a * a;
    for (Eigen::Index i = 0; i < a2.rows(); ++i)
      for (Eigen::Index j = 0; j < a2.cols(); ++j) a2(i, j) = a2(i, j) > 0 ? 1.0 : 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a2);
    Eigen::VectorXd top = es.eigenvectors().col(a2.rows() - 1).cwiseAbs();
    Eigen::VectorXd mine = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    EXPECT_GT(std::abs(top.dot(mine)), 0.9) << to_string(model);
  }
}

TEST(LaplacianHomophily, SingleEdge) {
  auto r = laplacian_homophily_vector(oracle::path(2));
  EXPECT_NEAR(r.h[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.h[1], -1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.eigenvalue, 2.0, 1e-9);
}

TEST(LaplacianHomophily, CompleteGraphDegenerateButDeterministic) {
  HomophilyOptions opt;
  opt.check_multiplicity = true;
  auto g = oracle::complete(6);
  auto a = laplacian_homophily_vector(g, opt);
  auto b = laplacian_homophily_vector(g, opt);
  EXPECT_TRUE(a.degenerate);
  EXPECT_EQ(a.h, b.h);
  EXPECT_NEAR(std::accumulate(a.h.begin(), a.h.end(), 0.0), 0.0, 1e-8);
  double first = 0;
  for (double x : a.h)
    if (std::abs(x) > 1e-14) {
      first = x;
      break;
    }
  EXPECT_GT(first, 0.0);
}

TEST(LaplacianHomophily, MatchesDenseSolverOnPath) {
  auto g = oracle::path(9);
  double l2 = 0;
  auto ref = dense_fiedler(g, &l2);
  HomophilyOptions opt;
  opt.check_multiplicity = true;
  auto r = laplacian_homophily_vector(g, opt);
  ASSERT_TRUE(r.converged);
  EXPECT_FALSE(r.degenerate);
  EXPECT_NEAR(r.eigenvalue, l2, 1e-8);
  Eigen::VectorXd h = Eigen::Map<const Eigen::VectorXd>(r.h.data(), r.h.size());
  EXPECT_NEAR(std::abs(h.dot(ref)), 1.0, 1e-8);
}

TEST(LaplacianHomophily, MatchesDenseSolverOnGeneratedGraphs) {
  for (auto model : {NetworkModel::BA, NetworkModel::ER, NetworkModel::SBM}) {
    auto g = generate(model, 160, {}, 12);
    if (component_count(g) != 1) continue;  // ER/SBM may fragment at this size
    double l2 = 0;
    auto ref = dense_fiedler(g, &l2);
    auto r = laplacian_homophily_vector(g);
    ASSERT_TRUE(r.converged) << to_string(model);
    EXPECT_NEAR(r.eigenvalue, l2, 1e-6) << to_string(model);
    Eigen::VectorXd h = Eigen::Map<const Eigen::VectorXd>(r.h.data(), r.h.size());
    EXPECT_GT(std::abs(h.dot(ref)), 1.0 - 1e-5) << to_string(model);
  }
}

TEST(LaplacianHomophily, DegreeWeightedOrthogonalToConstants) {
  for (auto model : {NetworkModel::BA, NetworkModel::RG, NetworkModel::SW, NetworkModel::ER,
                     NetworkModel::SBM}) {
    auto g = generate(model, 300, {}, 3);
    auto r = laplacian_homophily_vector(g);
    double dsum = 0;
    for (Unit i = 0; i < g.size(); ++i) dsum += static_cast<double>(g.in_degree(i)) * r.h[i];
    EXPECT_NEAR(dsum, 0.0, 1e-8) << to_string(model);
    double nrm = std::sqrt(std::inner_product(r.h.begin(), r.h.end(), r.h.begin(), 0.0));
    EXPECT_NEAR(nrm, 1.0, 1e-12);
  }
}

TEST(LaplacianHomophily, ZeroDegreeUnitsAndDisconnectedFlag) {
  auto g = parse_edge_list("# n=7\n0 1\n1 2\n2 0\n4 5\n5 6\n", false);
  auto r = laplacian_homophily_vector(g);
  EXPECT_TRUE(r.disconnected);
  EXPECT_EQ(r.h[3], 0.0);
  EXPECT_NEAR(r.eigenvalue, 0.0, 1e-8);
  auto iso = laplacian_homophily_vector(oracle::edgeless(3));
  EXPECT_EQ(iso.h, std::vector<double>(3, 0.0));
  EXPECT_FALSE(laplacian_homophily_vector(oracle::path(4)).disconnected);
}

TEST(LaplacianHomophily, RejectsDirectedGraph) {
  EXPECT_THROW(laplacian_homophily_vector(parse_edge_list("0 1\n", true)), std::invalid_argument);
}
