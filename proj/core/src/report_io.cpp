#include "qgraph/report_io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <utility>

#include <nlohmann/json.hpp>

namespace qgraph {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

void write_spectrum_csv(std::ostream& out, const SpectrumReport& r, const std::optional<OracleColumns>& oracle) {
  out << "lambda,multiplicity,class,method";
  if (oracle) out << ",oracle_lambda,discrepancy";
  out << '\n';
  for (std::size_t i = 0; i < r.pairs.size(); ++i) {
    const EigenPair& p = r.pairs[i];
    out << format_number(p.lambda) << ',' << p.multiplicity << ',' << to_string(p.eigen_class) << ','
        << to_string(r.method);
    if (oracle) {
      const bool have = i < oracle->oracle_lambda.size();
      out << ',' << (have ? format_number(oracle->oracle_lambda[i]) : "")
          << ',' << (have ? format_number(oracle->discrepancy[i]) : "");
    }
    out << '\n';
  }
}

namespace {

nlohmann::json to_array(const Vector& v) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

}  // namespace

void write_spectrum_json(std::ostream& out, const MetricGraph& g, const SpectrumReport& r) {
  nlohmann::ordered_json doc;
  doc["method"] = to_string(r.method);
  doc["lambda_max"] = r.lambda_max;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back(e.id);
  doc["edges"] = edges;
  doc["vertices"] = g.vertex_ids();
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const auto& p : r.pairs) {
    nlohmann::ordered_json jp;
    jp["lambda"] = p.lambda;
    jp["multiplicity"] = p.multiplicity;
    jp["class"] = to_string(p.eigen_class);
    nlohmann::ordered_json fs = nlohmann::ordered_json::array();
    for (const auto& f : p.eigenfunctions) {
      nlohmann::ordered_json jf;
      jf["a"] = to_array(f.a);
      jf["b"] = to_array(f.b);
      if (f.vertex_values) jf["d"] = to_array(*f.vertex_values);
      fs.push_back(std::move(jf));
    }
    jp["eigenfunctions"] = std::move(fs);
    pairs.push_back(std::move(jp));
  }
  doc["pairs"] = std::move(pairs);
  out << doc.dump(2) << '\n';
}

void write_snapshots_csv(std::ostream& out, const MetricGraph& g, const Series& series) {
  out << "t,edge,x,value\n";
  for (const auto& s : series) {
    const std::string t = format_number(s.t);
    for (std::size_t j = 0; j < s.u.edge_count(); ++j) {
      const std::string& id = g.edge(j).id;
      for (std::size_t i = 0; i < s.u.grid(); ++i) {
        out << t << ',' << id << ',' << format_number(s.u.x(i)) << ','
            << format_number(s.u.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
      }
    }
  }
}

namespace {

std::vector<std::pair<std::string, std::string>> stability_rows(const StabilityReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("n/a"); };
  auto flag = [](bool b) { return std::string(b ? "yes" : "no"); };
  return {
      {"gamma", r.gamma ? std::to_string(*r.gamma) : "n/a"},
      {"unit_speed", flag(r.unit_speed)},
      {"nu2", format_number(r.nu2)},
      {"lambda2", format_number(r.lambda2)},
      {"lambda2_formula", opt(r.lambda2_formula)},
      {"eta_bound", format_number(r.eta_bound)},
      {"diam_bound", format_number(r.diam_bound)},
      {"eta_exponent", opt(r.eta_exponent)},
      {"diam_exponent", opt(r.diam_exponent)},
      {"epsilon", format_number(r.epsilon)},
      {"guaranteed_rate", format_number(r.lambda2 + r.epsilon)},
      {"fitted_slope", opt(r.fitted_slope)},
      {"eta_bound_holds", flag(r.eta_bound_holds)},
      {"diam_bound_holds", flag(r.diam_bound_holds)},
      {"formula_matches", flag(r.formula_matches)},
      {"exponents_hold", flag(r.exponents_hold)},
      {"slope_within_rate", flag(r.slope_within_rate)},
  };
}

}  // namespace

void write_stability_csv(std::ostream& out, const StabilityReport& r) {
  out << "key,value\n";
  for (const auto& [k, v] : stability_rows(r)) out << k << ',' << v << '\n';
}

void write_stability_text(std::ostream& out, const StabilityReport& r) {
  for (const auto& [k, v] : stability_rows(r)) {
    out << k << std::string(k.size() < 18 ? 18 - k.size() : 1, ' ') << v << '\n';
  }
}

}  // namespace qgraph
