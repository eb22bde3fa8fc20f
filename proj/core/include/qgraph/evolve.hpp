#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "qgraph/edge_state.hpp"
#include "qgraph/metric_graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

/// Eigenfunctions of a SpectrumReport, flattened by multiplicity and sampled
/// on a shared grid. Orthonormal in X_2 (analytically). Immutable.
///
/// Projection solves the discrete Galerkin system G c = (f, phi) with the
/// Simpson Gram matrix G, so any state in the span is reproduced exactly.
class EigenBasis {
 public:
  EigenBasis(const MetricGraph& g, const SpectrumReport& report, std::size_t grid = 501,
             double lambda_max = std::numeric_limits<double>::infinity());

  const MetricGraph& graph() const noexcept { return g_; }
  std::size_t size() const noexcept { return modes_.size(); }
  std::size_t grid() const noexcept { return grid_; }
  const std::vector<double>& lambdas() const noexcept { return lambdas_; }
  const std::vector<EigenFunction>& modes() const noexcept { return modes_; }

  /// Coefficients of f (interpolated onto the basis grid if needed).
  Vector project(const EdgeState& f) const;
  /// sum_k c_k phi_k on the basis grid, or on `grid` points per edge.
  EdgeState synthesize(const Vector& c, std::size_t grid = 0) const;
  /// ||f - sum_k c_k phi_k|| / ||f|| in the Simpson X_2 norm.
  double completeness_defect(const EdgeState& f) const;

  /// X_2 Gram matrix of the modes from the closed-form inner product.
  Matrix analytic_gram() const;

  /// Value of sum_k c_k phi_k at a point.
  double evaluate(const Vector& c, std::size_t edge, double x) const;
  /// sup |sum_k c_k phi_k|, located on the grid and polished by a local
  /// golden-section search on each edge.
  double sup_norm(const Vector& c) const;
  /// sum_j mu_j int u_j from closed-form integrals of each mode.
  double mass(const Vector& c) const;
  /// X_2 norm by Parseval.
  double norm(const Vector& c) const { return c.norm(); }
  /// a(u, u) + ||v||^2 by Parseval.
  double energy(const Vector& u, const Vector& v) const;

 private:
  MetricGraph g_;
  std::size_t grid_;
  std::vector<double> lambdas_;
  std::vector<EigenFunction> modes_;
  Matrix samples_;        // (grid * m) x size, row j * grid + i
  Vector weights_;        // mu_j * Simpson weight, same row layout
  Eigen::LDLT<Matrix> gram_;
  Vector mode_mass_;

  Vector flatten(const EdgeState& f) const;
};

/// Constant state equal to the weighted mean (sum_j mu_j int f_j) / sum_j mu_j.
EdgeState equilibrium_projection(const MetricGraph& g, const EdgeState& f);

struct EvolveOptions {
  /// BasisTooSmall when the completeness defect of the data exceeds this.
  double defect_bound = 1e-3;
};

/// Heat semigroup in coefficient space: c_k exp(-lambda_k t).
Vector heat_coefficients(const EigenBasis& basis, const Vector& c, double t);
/// u(t) = sum_k exp(-lambda_k t) (f, phi_k) phi_k, t >= 0.
EdgeState heat_evolve(const EigenBasis& basis, const EdgeState& f, double t,
                      const EvolveOptions& options = {});
/// Snapshots of heat_evolve at the given times.
Series heat_series(const EigenBasis& basis, const EdgeState& f, std::span<const double> times,
                   const EvolveOptions& options = {});

/// Cosine/sine propagator in coefficient space; returns (u, u').
std::pair<Vector, Vector> wave_coefficients(const EigenBasis& basis, const Vector& f, const Vector& g0,
                                            double t);
/// u(t) = sum_k [cos(sqrt(l_k) t) (f, phi_k) + s_k(t) (g0, phi_k)] phi_k with
/// s_k(t) = sin(sqrt(l_k) t) / sqrt(l_k) and s_0(t) = t. Any real t.
std::pair<EdgeState, EdgeState> wave_evolve(const EigenBasis& basis, const EdgeState& f,
                                            const EdgeState& g0, double t,
                                            const EvolveOptions& options = {});

/// E = sum_j mu_j c_j int |u_j'|^2 + sum_j mu_j int |v_j|^2 with fourth-order
/// finite differences and Simpson quadrature.
double energy(const MetricGraph& g, const EdgeState& u, const EdgeState& v);

struct PositivityOptions {
  double tol = 1e-10;
  /// Sup norm of the initial state; the grid maximum of the first snapshot
  /// when absent.
  std::optional<double> initial_sup;
};

struct PositivityReport {
  bool positivity_checked = false;  // initial state nonnegative on the grid
  double min_value = 0.0;
  std::vector<double> positivity_violations;   // snapshot times
  double initial_sup = 0.0;
  double max_sup = 0.0;
  std::vector<double> contraction_violations;  // X_inf
  std::vector<double> l2_violations;           // X_2 norm increased
  bool ok() const {
    return positivity_violations.empty() && contraction_violations.empty() && l2_violations.empty();
  }
};

/// Sub-Markov checks along a series: positivity when the initial state is
/// nonnegative, X_inf contraction against the initial sup, and monotone X_2
/// norm. Sup norms are grid maxima.
PositivityReport check_positivity(const MetricGraph& g, const Series& series,
                                  const PositivityOptions& options = {});

/// t^{1/4} ||T(t) f||_inf / ||f||_2 with the sup taken on `grid` points per
/// edge (basis grid when 0).
double ultracontractivity_ratio(const EigenBasis& basis, const Vector& f, double t,
                                std::size_t grid = 0);
double ultracontractivity_ratio(const EigenBasis& basis, const EdgeState& f, double t);

/// Least-squares slope of log(distance) against t, ignoring the first
/// `skip_fraction` of the samples. Throws DegenerateSeries if fewer than 10
/// usable samples remain or a distance is not above 1e-12.
double decay_rate_fit(std::span<const double> t, std::span<const double> distance,
                      double skip_fraction = 0.25);
/// Same with distance ||u(t) - Pf||_2 (Simpson) along a series.
double decay_rate_fit(const MetricGraph& g, const Series& series, const EdgeState& projected,
                      double skip_fraction = 0.25);

/// Smooth bump sin^4(pi x) on one edge, zero elsewhere (C^3 across the
/// vertices, so its expansion converges quickly).
EdgeState bump_state(const MetricGraph& g, std::size_t grid, std::size_t edge);
EdgeState constant_state(const MetricGraph& g, std::size_t grid, double value = 1.0);

/// Standard normal coefficients on modes with lambda <= lambda_cap.
Vector random_coefficients(const EigenBasis& basis, std::mt19937_64& rng,
                           double lambda_cap = std::numeric_limits<double>::infinity());
/// Random combination of modes with lambda <= lambda_cap, shifted by a
/// constant so the state is nonnegative (checked on a 10x refined grid with
/// a small margin).
Vector random_nonnegative_coefficients(const EigenBasis& basis, std::mt19937_64& rng,
                                       double lambda_cap = std::numeric_limits<double>::infinity());

}  // namespace qgraph
