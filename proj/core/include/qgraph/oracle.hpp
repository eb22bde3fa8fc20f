#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "qgraph/edge_state.hpp"
#include "qgraph/metric_graph.hpp"

namespace qgraph {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Optional spatially varying diffusivity c(edge, x); overrides the edge
/// constant when set.
using Diffusivity = std::function<double(std::size_t edge, double x)>;

/// Piecewise-linear finite elements for the form
///   a(f, g) = sum_j mu_j int c_j f' g'  and  (f, g) = sum_j mu_j int f g
/// with N uniform intervals per edge. Vertex nodes are shared by all incident
/// edges, so continuity holds by construction and the Kirchhoff condition is
/// the natural boundary condition.
///
/// DOF layout: vertices 0..n-1, then the N-1 interior nodes of edge 0,
/// edge 1, and so on.
struct Discretization {
  MetricGraph g;
  std::size_t intervals = 0;
  SparseMatrix K;  // stiffness
  SparseMatrix M;  // consistent mass

  double h() const { return 1.0 / static_cast<double>(intervals); }
  std::size_t dof_count() const { return g.vertex_count() + g.edge_count() * (intervals - 1); }
  /// DOF of node k (0..N) on edge j.
  std::size_t dof(std::size_t edge, std::size_t node) const;
};

/// Throws std::invalid_argument unless 1/h is an integer N >= 2.
Discretization assemble(const MetricGraph& g, double h, const Diffusivity& c = {});

struct EigenCluster {
  double lambda = 0.0;  // mean of the cluster
  std::size_t size = 0;
};

struct OracleSpectrum {
  std::vector<double> values;  // ascending, repeated by multiplicity
  std::vector<EigenCluster> clusters;
  double cluster_gap = 1e-6;  // values within cluster_gap * (1 + lambda) share a cluster
};

/// Smallest `count` eigenvalues of K x = lambda M x (Cholesky of M, then a
/// dense symmetric eigensolver). Throws EigSolverFailure.
OracleSpectrum oracle_eigs(const Discretization& d, std::size_t count, double cluster_gap = 1e-6);

/// Groups ascending values into clusters with relative gap `gap`.
std::vector<EigenCluster> cluster_values(const std::vector<double>& values, double gap);

/// Richardson extrapolation for an O(h^2) quantity computed at h and h/2.
double richardson(double coarse, double fine);

/// Observed convergence order from errors at h and h/2.
double observed_order(double err_coarse, double err_fine);

Vector to_dofs(const Discretization& d, const EdgeState& u);
/// Nodal values as an EdgeState on the mesh grid (N + 1 points per edge).
EdgeState from_dofs(const Discretization& d, const Vector& x);

/// Discrete weighted mass 1^T M x.
double oracle_mass(const Discretization& d, const Vector& x);

/// Trapezoidal rule for M u' = -K u:
///   (M + dt/2 K) u_{k+1} = (M - dt/2 K) u_k.
/// Returns the states at steps 0, stride, 2 stride, ... and at the final
/// step. `u0` is interpolated onto the mesh if its grid differs. Throws
/// SingularStep if the step matrix cannot be factorized.
Series crank_nicolson(const Discretization& d, const EdgeState& u0, double dt, double T,
                      std::size_t stride = 1);

/// Same recursion on DOF vectors.
std::vector<Vector> crank_nicolson_dofs(const Discretization& d, const Vector& u0, double dt,
                                        std::size_t steps, std::size_t stride = 1);

/// MatrixMarket coordinate dump (general, real).
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

}  // namespace qgraph
