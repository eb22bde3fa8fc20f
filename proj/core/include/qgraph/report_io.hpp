#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/edge_state.hpp"
#include "qgraph/metric_graph.hpp"
#include "qgraph/spectral.hpp"
#include "qgraph/stability.hpp"

namespace qgraph {

/// 15 significant digits, '.' decimal point, independent of locale.
std::string format_number(double v);

/// Optional oracle columns appended to the spectrum CSV, one value per row.
struct OracleColumns {
  std::vector<double> oracle_lambda;
  std::vector<double> discrepancy;
};

/// Columns lambda, multiplicity, class, method (+ oracle_lambda, discrepancy).
void write_spectrum_csv(std::ostream& out, const SpectrumReport& r,
                        const std::optional<OracleColumns>& oracle = std::nullopt);

/// JSON document with every eigenpair and its eigenfunction coefficients.
void write_spectrum_json(std::ostream& out, const MetricGraph& g, const SpectrumReport& r);

/// Columns t, edge, x, value.
void write_snapshots_csv(std::ostream& out, const MetricGraph& g, const Series& series);

/// Key/value CSV and aligned text forms of a stability report.
void write_stability_csv(std::ostream& out, const StabilityReport& r);
void write_stability_text(std::ostream& out, const StabilityReport& r);

}  // namespace qgraph
