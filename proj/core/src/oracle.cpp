#include "qgraph/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

using Index = Eigen::Index;
using Triplet = Eigen::Triplet<double>;

Index idx(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

std::size_t Discretization::dof(std::size_t edge, std::size_t node) const {
  const Edge& e = g.edge(edge);
  if (node == 0) return e.tail;
  if (node == intervals) return e.head;
  return g.vertex_count() + edge * (intervals - 1) + (node - 1);
}

Discretization assemble(const MetricGraph& g, double h, const Diffusivity& c) {
  const double nd = 1.0 / h;
  const auto n = static_cast<std::size_t>(std::llround(nd));
  if (n < 2 || std::abs(nd - static_cast<double>(n)) > 1e-9 * nd) {
    throw std::invalid_argument("mesh width must be 1/N with integer N >= 2");
  }
  Discretization d{g, n, {}, {}};
  const double hh = 1.0 / static_cast<double>(n);
  // two-point Gauss nodes on the reference element [0,1]
  const double gp = 0.5 - 0.5 / std::sqrt(3.0);

  std::vector<Triplet> kt, mt;
  kt.reserve(4 * g.edge_count() * n);
  mt.reserve(4 * g.edge_count() * n);
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const Edge& e = g.edge(j);
    for (std::size_t k = 0; k < n; ++k) {
      double cbar = e.c;
      if (c) {
        const double x0 = static_cast<double>(k) * hh;
        cbar = 0.5 * (c(j, x0 + gp * hh) + c(j, x0 + (1.0 - gp) * hh));
      }
      const double ks = e.mu * cbar / hh;
      const double ms = e.mu * hh / 6.0;
      const auto a = static_cast<SparseMatrix::StorageIndex>(d.dof(j, k));
      const auto b = static_cast<SparseMatrix::StorageIndex>(d.dof(j, k + 1));
      kt.insert(kt.end(), {{a, a, ks}, {b, b, ks}, {a, b, -ks}, {b, a, -ks}});
      mt.insert(mt.end(), {{a, a, 2 * ms}, {b, b, 2 * ms}, {a, b, ms}, {b, a, ms}});
    }
  }
  const Index dofs = idx(d.dof_count());
  d.K.resize(dofs, dofs);
  d.M.resize(dofs, dofs);
  d.K.setFromTriplets(kt.begin(), kt.end());
  d.M.setFromTriplets(mt.begin(), mt.end());
  return d;
}

std::vector<EigenCluster> cluster_values(const std::vector<double>& values, double gap) {
  std::vector<EigenCluster> out;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!out.empty() && v - values[i - 1] <= gap * (1.0 + std::abs(v))) {
      sum += v;
      out.back().size += 1;
      out.back().lambda = sum / static_cast<double>(out.back().size);
    } else {
      sum = v;
      out.push_back({v, 1});
    }
  }
  return out;
}

OracleSpectrum oracle_eigs(const Discretization& d, std::size_t count, double cluster_gap) {
  const Matrix k(d.K);
  const Matrix m(d.M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(k, m, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::EigSolverFailure, "generalized eigensolve did not converge");
  }
  OracleSpectrum s;
  s.cluster_gap = cluster_gap;
  const Index take = std::min(idx(count), es.eigenvalues().size());
  for (Index i = 0; i < take; ++i) s.values.push_back(es.eigenvalues()[i]);
  s.clusters = cluster_values(s.values, cluster_gap);
  return s;
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

double observed_order(double err_coarse, double err_fine) {
  return std::log2(std::abs(err_coarse) / std::abs(err_fine));
}

Vector to_dofs(const Discretization& d, const EdgeState& u) {
  if (u.edge_count() != d.g.edge_count()) throw std::invalid_argument("state has the wrong edge count");
  const EdgeState s = u.grid() == d.intervals + 1 ? u : resample(u, d.intervals + 1);
  Vector x = Vector::Zero(idx(d.dof_count()));
  Vector hits = Vector::Zero(idx(d.g.vertex_count()));
  for (std::size_t j = 0; j < d.g.edge_count(); ++j) {
    for (std::size_t k = 0; k <= d.intervals; ++k) {
      const std::size_t p = d.dof(j, k);
      const double v = s.values(idx(k), idx(j));
      if (p < d.g.vertex_count()) {
        x[idx(p)] += v;
        hits[idx(p)] += 1.0;
      } else {
        x[idx(p)] = v;
      }
    }
  }
  const Index n = idx(d.g.vertex_count());
  x.head(n) = x.head(n).cwiseQuotient(hits);
  return x;
}

EdgeState from_dofs(const Discretization& d, const Vector& x) {
  EdgeState s(d.intervals + 1, d.g.edge_count());
  for (std::size_t j = 0; j < d.g.edge_count(); ++j) {
    for (std::size_t k = 0; k <= d.intervals; ++k) s.values(idx(k), idx(j)) = x[idx(d.dof(j, k))];
  }
  return s;
}

double oracle_mass(const Discretization& d, const Vector& x) { return (d.M * x).sum(); }

std::vector<Vector> crank_nicolson_dofs(const Discretization& d, const Vector& u0, double dt,
                                        std::size_t steps, std::size_t stride) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  stride = std::max<std::size_t>(stride, 1);
  const SparseMatrix lhs = d.M + (0.5 * dt) * d.K;
  const SparseMatrix rhs = d.M - (0.5 * dt) * d.K;
  Eigen::SimplicialLDLT<SparseMatrix> solver(lhs);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularStep, "M + dt/2 K could not be factorized");
  }
  std::vector<Vector> out{u0};
  Vector u = u0;
  for (std::size_t k = 1; k <= steps; ++k) {
    u = solver.solve(rhs * u);
    if (k % stride == 0 || k == steps) out.push_back(u);
  }
  return out;
}

Series crank_nicolson(const Discretization& d, const EdgeState& u0, double dt, double T,
                      std::size_t stride) {
  if (!(T >= 0.0)) throw std::invalid_argument("T must be nonnegative");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  stride = std::max<std::size_t>(stride, 1);
  const auto states = crank_nicolson_dofs(d, to_dofs(d, u0), dt, steps, stride);
  Series series;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::size_t step = std::min(i * stride, steps);
    series.push_back({static_cast<double>(step) * dt, from_dofs(d, states[i])});
  }
  return series;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  const auto old = out.precision(17);
  for (Index k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
  out.precision(old);
}

}  // namespace qgraph
