#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qgraph/metric_graph.hpp"

namespace qgraph {

// Spectral theory of the Kirchhoff Laplacian A = diag(c_j d^2/dx^2) with
// constant speeds. Eigenvalues are reported as lambda >= 0 with A f = -lambda f.

/// Eigenfunction in coefficient form. For lambda > 0, on edge j
///   f_j(x) = a_j cos(theta_j x) + b_j sin(theta_j x),  theta_j = sqrt(lambda / c_j);
/// for lambda == 0, f_j(x) = a_j + b_j x.
struct EigenFunction {
  double lambda = 0.0;
  Vector a;
  Vector b;
  /// Common vertex values (the trace vector d), when known.
  std::optional<Vector> vertex_values;

  double value(const MetricGraph& g, std::size_t edge, double x) const;
  double derivative(const MetricGraph& g, std::size_t edge, double x) const;
  double second_derivative(const MetricGraph& g, std::size_t edge, double x) const;
};

/// X_2 inner product sum_j mu_j int_0^1 f_j g_j dx, evaluated in closed form.
double inner_product(const MetricGraph& g, const EigenFunction& f, const EigenFunction& h);

enum class EigenClass { Zero, SigmaL, SigmaC };
enum class SpectrumMethod { SecularScan, UnitSpeedClosedForm };

const char* to_string(EigenClass c) noexcept;
const char* to_string(SpectrumMethod m) noexcept;

/// An eigenvalue with an X_2-orthonormal basis of its eigenspace.
struct EigenPair {
  double lambda = 0.0;
  std::size_t multiplicity = 0;
  EigenClass eigen_class = EigenClass::Zero;
  std::vector<EigenFunction> eigenfunctions;
};

struct SpectrumReport {
  double lambda_max = 0.0;
  SpectrumMethod method = SpectrumMethod::SecularScan;
  std::vector<EigenPair> pairs;  // ascending lambda

  /// Eigenvalues repeated by multiplicity, ascending.
  std::vector<double> expanded() const;
  /// Smallest positive eigenvalue (the decay exponent is its negative).
  std::optional<double> first_positive() const;
};

struct SpectralTolerances {
  /// lambda is singular when |sqrt(lambda / c_j) - l pi| < singular_window.
  double singular_window = 1e-6;
  /// Singular values below kernel_rel * sigma_max count as kernel.
  double kernel_rel = 1e-8;
  /// Bisection stops once the bracket is narrower than this.
  double root_abs = 1e-12;
  /// Relative gap under which eigenvalues from different routes merge.
  double merge_rel = 1e-9;
  /// Allowed ||L_C(lambda) d|| / ||L_C(lambda)|| for a kernel vector.
  double kernel_residual = 1e-8;
};

struct ScanOptions {
  SpectralTolerances tol;
  /// Worker threads for the interval scan; output does not depend on it.
  unsigned jobs = 1;
};

/// True when lambda lies in an exclusion window around some c_j l^2 pi^2.
bool is_singular(const MetricGraph& g, double lambda, double window = 1e-6);

/// Distinct values c_j l^2 pi^2 in (0, lambda_max], ascending.
std::vector<double> singular_points(const MetricGraph& g, double lambda_max);

/// Entrywise generalized weighted adjacency matrix: entry (i,k) sums
/// mu_j sqrt(c_j) / sin(sqrt(lambda / c_j)) over edges joining v_i and v_k.
/// Throws SingularLambda on the excluded set.
Matrix generalized_adjacency(const MetricGraph& g, double lambda, double window = 1e-6);
/// Entrywise generalized degree matrix:
/// diag(sum_{j in Gamma(v_i)} mu_j sqrt(c_j) cot(sqrt(lambda / c_j))).
Matrix generalized_degree(const MetricGraph& g, double lambda, double window = 1e-6);

/// The same two matrices assembled as products of the weighted incidence
/// matrices with the diagonal Sin^{-1}, Cot and C = diag(1/sqrt(c_j)).
Matrix generalized_adjacency_incidence(const MetricGraph& g, double lambda, double window = 1e-6);
Matrix generalized_degree_incidence(const MetricGraph& g, double lambda, double window = 1e-6);

/// L_C(lambda) = D_C(lambda) - A_C(lambda). Symmetric; strictly decreasing
/// in the Loewner order between consecutive singular points.
Matrix generalized_laplacian(const MetricGraph& g, double lambda, double window = 1e-6);

/// det L_C(lambda).
double secular_determinant(const MetricGraph& g, double lambda, double window = 1e-6);

struct SecularRoot {
  double lambda = 0.0;
  std::size_t kernel_dim = 0;
  Matrix kernel;  // n x kernel_dim, orthonormal columns
};

/// All roots of det L_C in (0, lambda_max] outside the singular windows.
///
/// Because L_C(lambda) is decreasing between poles, the number of negative
/// eigenvalues N(lambda) is a nondecreasing step function on each interval
/// and jumps by dim ker L_C at every root. Roots are isolated by bisection
/// on N, which also catches even-multiplicity roots where det does not
/// change sign. Throws ScanResolutionTooCoarse if a bracket at the root
/// tolerance holds more jumps than the kernel dimension found there.
std::vector<SecularRoot> scan_sigma_L(const MetricGraph& g, double lambda_max,
                                      const ScanOptions& options = {});

/// Eigenspace at a singular value lambda = c_i k^2 pi^2 from the linear
/// system on (d, b): vertex sign constraints for edges with integer
/// sqrt(c_i / c_j) k, the continuity relation for b_j on the other edges,
/// and the Kirchhoff condition. Empty optional if only the trivial solution.
std::optional<EigenPair> sigma_C_at(const MetricGraph& g, double lambda,
                                    const SpectralTolerances& tol = {});
/// sigma_C_at(g, c_i k^2 pi^2); `edge` is the 0-based index i.
std::optional<EigenPair> sigma_C_check(const MetricGraph& g, std::size_t edge, int k,
                                       const SpectralTolerances& tol = {});

/// Builds the eigenfunction a = (Phi+)^T d, b = Sin^{-1}((Phi-)^T - Cos (Phi+)^T) d.
/// lambda == 0 yields a_j = d_tail, b_j = d_head - d_tail. Throws
/// KernelMismatch when d is not (numerically) in ker L_C(lambda).
EigenFunction eigenfunction_from_kernel(const MetricGraph& g, double lambda, const Vector& d,
                                        const SpectralTolerances& tol = {});

/// Closed-form spectrum for c_j == 1 from the eigenvalues alpha of the
/// mu-weighted transition matrix: (2 l pi +- arccos alpha)^2 with
/// multiplicity dim ker(cos sqrt(lambda) - P), plus k^2 pi^2 with
/// multiplicity m - n + 2 (bipartite, or k even) or m - n (k odd,
/// non-bipartite). Throws NotUnitSpeed.
SpectrumReport unit_speed_spectrum(const MetricGraph& g, double lambda_max,
                                   const SpectralTolerances& tol = {});

/// General route: {0} merged with the secular scan and the singular-point
/// eigenspaces, never using the closed form.
SpectrumReport secular_spectrum(const MetricGraph& g, double lambda_max,
                                const ScanOptions& options = {});

/// unit_speed_spectrum when every c_j == 1, secular_spectrum otherwise.
SpectrumReport spectrum(const MetricGraph& g, double lambda_max, const ScanOptions& options = {});

/// How far an eigenfunction is from D(A) and from solving c f'' = -lambda f.
struct DomainDefect {
  double continuity = 0.0;  // max spread of edge values meeting at a vertex
  double kirchhoff = 0.0;   // max |Phi_w+ f'(0) - Phi_w- f'(1)|
  double residual = 0.0;    // max over the grid of |c_j f_j'' + lambda f_j|
};

DomainDefect domain_defect(const MetricGraph& g, const EigenFunction& f,
                           std::size_t grid_points = 1000);

}  // namespace qgraph
