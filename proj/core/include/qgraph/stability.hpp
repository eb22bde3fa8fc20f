#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "qgraph/metric_graph.hpp"
#include "qgraph/spectral.hpp"

namespace qgraph {

// Signed convention: lambda2 is the largest nonzero eigenvalue of the
// generator, so it is negative and the heat flow approaches equilibrium like
// exp(lambda2 t).

/// lambda2 = -(arccos(1 - nu2 / gamma))^2 for a regular unit-speed graph.
/// Throws NotRegular, NotUnitSpeed, or NonuniformNodeWeight.
double lambda2_regular(const MetricGraph& g);

/// 2 eta (1 - cos(pi / n)), a lower bound for nu2.
double nu2_bound_edge_connectivity(const MetricGraph& g);
/// 4 / (n diam), a lower bound for nu2.
double nu2_bound_diameter(const MetricGraph& g);

/// -(arccos(1 - bound / gamma))^2: the decay exponent implied by a lower
/// bound on nu2.
double bound_exponent(double nu2_bound, double gamma);

/// lambda2 from the spectrum (closed form or secular scan), negative.
double lambda2_spectral(const MetricGraph& g, const ScanOptions& options = {});

struct StabilityReport {
  std::optional<std::size_t> gamma;
  bool unit_speed = false;
  double nu2 = 0.0;
  double eta_bound = 0.0;
  double diam_bound = 0.0;
  /// Closed-form lambda2 when the graph is regular, unit speed and has a
  /// uniform node weight; absent otherwise (flagged not applicable).
  std::optional<double> lambda2_formula;
  double lambda2 = 0.0;  // from the spectrum
  std::optional<double> eta_exponent;
  std::optional<double> diam_exponent;
  double epsilon = 0.0;
  std::optional<double> fitted_slope;

  bool eta_bound_holds = true;      // eta_bound <= nu2
  bool diam_bound_holds = true;     // diam_bound <= nu2
  bool formula_matches = true;      // |lambda2_formula - lambda2| <= 1e-10
  bool exponents_hold = true;       // lambda2 <= each bound exponent
  bool slope_within_rate = true;    // fitted_slope <= lambda2 + epsilon

  bool ok() const {
    return eta_bound_holds && diam_bound_holds && formula_matches && exponents_hold && slope_within_rate;
  }
};

/// Convergence report for a regular unit-speed graph. Throws NotRegular or
/// NotUnitSpeed; epsilon must be positive.
StabilityReport convergence_bound(const MetricGraph& g, double epsilon,
                                  std::optional<double> fitted_slope = std::nullopt);

/// Same report for any graph: bound exponents and the closed-form lambda2
/// are left out where they do not apply.
StabilityReport stability_report(const MetricGraph& g, double epsilon,
                                 std::optional<double> fitted_slope = std::nullopt,
                                 const ScanOptions& options = {});

}  // namespace qgraph
