#include "qgraph/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgraph/error.hpp"

namespace qgraph {

double lambda2_regular(const MetricGraph& g) {
  const auto gamma = g.regular_degree();
  if (!gamma) throw Error(ErrorCode::NotRegular, "graph is not regular");
  if (!g.unit_speed()) throw Error(ErrorCode::NotUnitSpeed, "formula needs c_j == 1 on every edge");
  if (!g.uniform_node_weight()) {
    throw Error(ErrorCode::NonuniformNodeWeight, "formula needs equal mu_j on every edge");
  }
  return bound_exponent(graph_params(g).nu2(), static_cast<double>(*gamma));
}

double nu2_bound_edge_connectivity(const MetricGraph& g) {
  const double n = static_cast<double>(g.vertex_count());
  return 2.0 * edge_connectivity(g) * (1.0 - std::cos(std::numbers::pi / n));
}

double nu2_bound_diameter(const MetricGraph& g) {
  return 4.0 / (static_cast<double>(g.vertex_count()) * diameter(g));
}

double bound_exponent(double nu2_bound, double gamma) {
  const double a = std::clamp(1.0 - nu2_bound / gamma, -1.0, 1.0);
  const double t = std::acos(a);
  return -t * t;
}

double lambda2_spectral(const MetricGraph& g, const ScanOptions& options) {
  double cmax = 0.0;
  for (const auto& e : g.edges()) cmax = std::max(cmax, e.c);
  double lambda_max = cmax * std::numbers::pi * std::numbers::pi * 1.01;
  for (int attempt = 0; attempt < 8; ++attempt, lambda_max *= 2.0) {
    if (auto first = spectrum(g, lambda_max, options).first_positive()) return -*first;
  }
  throw Error(ErrorCode::KernelMismatch, "no positive eigenvalue found");
}

StabilityReport stability_report(const MetricGraph& g, double epsilon, std::optional<double> fitted_slope,
                                 const ScanOptions& options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  StabilityReport r;
  const GraphParams p = graph_params(g);
  r.gamma = p.gamma;
  r.unit_speed = g.unit_speed();
  r.nu2 = p.nu2();
  r.eta_bound = nu2_bound_edge_connectivity(g);
  r.diam_bound = nu2_bound_diameter(g);
  r.epsilon = epsilon;
  r.fitted_slope = fitted_slope;
  const double slack = 1e-12 * std::max(1.0, r.nu2);
  r.eta_bound_holds = r.eta_bound <= r.nu2 + slack;
  r.diam_bound_holds = r.diam_bound <= r.nu2 + slack;
  r.lambda2 = lambda2_spectral(g, options);

  if (r.gamma && r.unit_speed && g.uniform_node_weight()) {
    const auto gamma = static_cast<double>(*r.gamma);
    r.lambda2_formula = lambda2_regular(g);
    r.formula_matches = std::abs(*r.lambda2_formula - r.lambda2) <= 1e-10 * std::max(1.0, std::abs(r.lambda2));
    r.eta_exponent = bound_exponent(r.eta_bound, gamma);
    r.diam_exponent = bound_exponent(r.diam_bound, gamma);
    const double tol = 1e-12;
    r.exponents_hold = r.lambda2 <= *r.eta_exponent + tol && r.lambda2 <= *r.diam_exponent + tol;
  }
  if (fitted_slope) r.slope_within_rate = *fitted_slope <= r.lambda2 + epsilon;
  return r;
}

StabilityReport convergence_bound(const MetricGraph& g, double epsilon, std::optional<double> fitted_slope) {
  if (!g.regular_degree()) throw Error(ErrorCode::NotRegular, "graph is not regular");
  if (!g.unit_speed()) throw Error(ErrorCode::NotUnitSpeed, "bounds need c_j == 1 on every edge");
  if (!g.uniform_node_weight()) {
    throw Error(ErrorCode::NonuniformNodeWeight, "bounds need equal mu_j on every edge");
  }
  return stability_report(g, epsilon, fitted_slope);
}

}  // namespace qgraph
