// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qgraph/qgraph.hpp"
#include "support/oracles.hpp"

using namespace qgraph;
using testing::kPi;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      detail << " [" << why << "]";
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. closed form vs finite elements, first 8 eigenvalues, three meshes.
Outcome closed_form_vs_oracle() {
  Outcome o;
  const auto start = Clock::now();
  double worst_rel = 0.0, min_order = 10.0, max_order = 0.0;
  const std::vector<std::pair<std::string, MetricGraph>> graphs{
      {"K3", complete_graph(3)}, {"C4", cycle_graph(4)}, {"K4", complete_graph(4)}};
  for (const auto& [name, g] : graphs) {
    auto exact = unit_speed_spectrum(g, 80.0).expanded();
    if (exact.size() < 8) {
      o.require(false, name + ": fewer than 8 eigenvalues below 80");
      continue;
    }
    exact.resize(8);
    std::vector<std::vector<double>> fem;
    for (double h : {1.0 / 50, 1.0 / 100, 1.0 / 200}) fem.push_back(oracle_eigs(assemble(g, h), 8).values);
    for (std::size_t k = 0; k < 8; ++k) {
      if (exact[k] == 0.0) {
        o.require(std::abs(fem[2][k]) < 1e-8, name + ": zero eigenvalue not reproduced");
        continue;
      }
      const double rel = std::abs(fem[2][k] - exact[k]) / exact[k];
      worst_rel = std::max(worst_rel, rel);
      o.require(rel <= 1e-3, name + " k=" + std::to_string(k) + " rel " + num(rel));
      const double order = observed_order(std::abs(fem[1][k] - exact[k]), std::abs(fem[2][k] - exact[k]));
      min_order = std::min(min_order, order);
      max_order = std::max(max_order, order);
      o.require(order >= 1.9 && order <= 2.1, name + " k=" + std::to_string(k) + " order " + num(order));
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed <= 30.0, "runtime " + num(elapsed) + " s");
  o.detail << "max rel err " << num(worst_rel) << " at h=1/200, order in [" << num(min_order) << ", "
           << num(max_order) << "], " << num(elapsed) << " s";
  return o;
}

std::size_t oracle_cluster_size(const OracleSpectrum& s, double lambda) {
  for (const auto& c : s.clusters) {
    if (std::abs(c.lambda - lambda) <= 1e-3 * lambda) return c.size;
  }
  return 0;
}

// 2. multiplicities of k^2 pi^2, by the singular-point system and by FEM clusters.
Outcome multiplicities() {
  Outcome o;
  struct Case {
    std::string name;
    MetricGraph g;
    std::vector<std::size_t> expected;  // k = 1..4
  };
  const std::vector<Case> cases{{"K3", complete_graph(3), {0, 2, 0, 2}}, {"C4", cycle_graph(4), {2, 2, 2, 2}}};
  for (const auto& c : cases) {
    const OracleSpectrum s = oracle_eigs(assemble(c.g, 1.0 / 200), 40, 1e-6);
    for (int k = 1; k <= 4; ++k) {
      const auto want = c.expected[static_cast<std::size_t>(k - 1)];
      const auto pair = sigma_C_check(c.g, 0, k);
      const std::size_t got = pair ? pair->multiplicity : 0;
      o.require(got == want, c.name + " k=" + std::to_string(k) + " sigma_C " + std::to_string(got));
      const double lambda = k * k * kPi * kPi;
      if (lambda < s.values.back()) {
        const std::size_t fem = oracle_cluster_size(s, lambda);
        o.require(fem == want, c.name + " k=" + std::to_string(k) + " oracle cluster " + std::to_string(fem));
      } else {
        o.require(false, c.name + " k=" + std::to_string(k) + " beyond oracle range");
      }
    }
  }
  o.detail << "K3: k odd absent, k even 2; C4: 2 for k=1..4 (sigma_C system and FEM clusters)";
  return o;
}

// 3. entrywise generalized matrices vs incidence products.
Outcome incidence_identity() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> lam(1e-3, 30.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const MetricGraph g = testing::random_weighted_graph(rng, 6);
    double lambda = lam(rng);
    while (is_singular(g, lambda)) lambda = lam(rng);
    const Matrix a = generalized_adjacency(g, lambda), ai = generalized_adjacency_incidence(g, lambda);
    const Matrix d = generalized_degree(g, lambda), di = generalized_degree_incidence(g, lambda);
    const double err = std::max((a - ai).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff()),
                                (d - di).cwiseAbs().maxCoeff() / std::max(1.0, d.cwiseAbs().maxCoeff()));
    worst = std::max(worst, err);
  }
  o.require(worst <= 1e-12, "max difference " + num(worst));
  o.detail << "200 instances, max scaled difference " << num(worst);
  return o;
}

double fitted_slope(const MetricGraph& g, double lambda2) {
  const EigenBasis basis(g, spectrum(g, 1600.0), 501);
  const EdgeState f = bump_state(g, basis.grid(), 0);
  const double T = 8.0 / std::abs(lambda2);
  std::vector<double> times;
  for (int k = 0; k <= 200; ++k) times.push_back(T * k / 200.0);
  return decay_rate_fit(g, heat_series(basis, f, times), equilibrium_projection(g, f));
}

// 4. heat decay slopes on K3 and C4..C6.
Outcome decay_rates() {
  Outcome o;
  std::vector<std::pair<std::string, std::pair<MetricGraph, double>>> cases{
      {"K3", {complete_graph(3), -4 * kPi * kPi / 9}}};
  for (std::size_t n = 4; n <= 6; ++n) {
    cases.push_back({"C" + std::to_string(n), {cycle_graph(n), -4 * kPi * kPi / static_cast<double>(n * n)}});
  }
  for (const auto& [name, gc] : cases) {
    const double slope = fitted_slope(gc.first, gc.second);
    const double rel = std::abs(slope - gc.second) / std::abs(gc.second);
    o.require(rel <= 0.02, name + " slope " + num(slope));
    o.detail << name << ' ' << num(slope) << " (" << num(100 * rel) << "%) ";
  }
  return o;
}

// 5. semigroup properties on random nonnegative states.
Outcome semigroup_properties() {
  Outcome o;
  const std::vector<MetricGraph> graphs{complete_graph(3), cycle_graph(4), complete_graph(4)};
  std::mt19937_64 rng(5);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.05 * k);
  std::size_t states = 0, violations = 0;
  double worst_mass = 0.0, worst_cn_mass = 0.0, min_value = std::numeric_limits<double>::infinity();
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const MetricGraph& g = graphs[gi];
    const EigenBasis basis(g, spectrum(g, 400.0), 501);
    const Discretization d = assemble(g, 1.0 / 50);
    const std::size_t count = gi == 0 ? 34 : 33;
    for (std::size_t s = 0; s < count; ++s, ++states) {
      const Vector c = random_nonnegative_coefficients(basis, rng);
      const double m0 = basis.mass(c);
      Series series;
      for (double t : times) {
        const Vector ct = heat_coefficients(basis, c, t);
        worst_mass = std::max(worst_mass, std::abs(basis.mass(ct) - m0) / std::max(1.0, std::abs(m0)));
        series.push_back({t, basis.synthesize(ct)});
      }
      const PositivityReport r = check_positivity(g, series, {1e-10, basis.sup_norm(c)});
      min_value = std::min(min_value, r.min_value);
      if (!r.positivity_checked || !r.ok()) ++violations;

      const auto cn = crank_nicolson_dofs(d, to_dofs(d, basis.synthesize(c)), 0.01, 200, 1);
      const double cm0 = oracle_mass(d, cn.front());
      for (std::size_t k = 1; k < cn.size(); ++k) {
        worst_cn_mass = std::max(worst_cn_mass, std::abs(oracle_mass(d, cn[k]) - oracle_mass(d, cn[k - 1])));
      }
      worst_cn_mass = std::max(worst_cn_mass, std::abs(oracle_mass(d, cn.back()) - cm0) / 200.0);
    }
  }
  o.require(violations == 0, std::to_string(violations) + " states with violations");
  o.require(worst_mass <= 1e-10, "expansion mass drift " + num(worst_mass));
  o.require(worst_cn_mass <= 1e-12, "Crank-Nicolson mass drift per step " + num(worst_cn_mass));
  o.detail << states << " states on K3/C4/K4, min value " << num(min_value) << ", mass drift " << num(worst_mass)
           << " (expansion), " << num(worst_cn_mass) << " per step (Crank-Nicolson)";
  return o;
}

double ultracontractivity_constant(const EigenBasis& basis, const std::vector<Vector>& fs, std::size_t grid,
                                   std::size_t t_points) {
  double best = 0.0;
  for (const Vector& f : fs) {
    for (std::size_t i = 0; i < t_points; ++i) {
      const double t = std::pow(10.0, -4.0 + 4.0 * static_cast<double>(i) / static_cast<double>(t_points - 1));
      best = std::max(best, ultracontractivity_ratio(basis, f, t, grid));
    }
  }
  return best;
}

// 6. ultracontractivity constant on K3 and its stability under refinement.
Outcome ultracontractivity() {
  Outcome o;
  const MetricGraph g = complete_graph(3);
  const EigenBasis basis(g, spectrum(g, 1600.0), 501);
  std::mt19937_64 rng(6);
  std::vector<Vector> fs;
  for (int i = 0; i < 20; ++i) fs.push_back(random_coefficients(basis, rng));
  const double coarse = ultracontractivity_constant(basis, fs, 501, 41);
  const double fine = ultracontractivity_constant(basis, fs, 1001, 81);
  const double change = std::abs(fine - coarse) / coarse;
  o.require(std::isfinite(coarse) && std::isfinite(fine), "constant not finite");
  o.require(change <= 0.05, "refinement change " + num(change));
  o.detail << "M = " << num(fine) << " (coarse " << num(coarse) << ", change " << num(100 * change) << "%)";
  return o;
}

// 7. wave energy and time reversal.
Outcome wave() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst_energy = 0.0, worst_reverse = 0.0;
  for (const MetricGraph& g : {complete_graph(3), cycle_graph(4), complete_graph(4)}) {
    const EigenBasis basis(g, spectrum(g, 400.0), 501);
    for (int trial = 0; trial < 5; ++trial) {
      const Vector f = random_coefficients(basis, rng);
      const Vector v0 = random_coefficients(basis, rng);
      const double e0 = basis.energy(f, v0);
      for (int k = 0; k <= 100; ++k) {
        const double t = 0.1 * k;
        const auto [u, v] = wave_coefficients(basis, f, v0, t);
        worst_energy = std::max(worst_energy, std::abs(basis.energy(u, v) - e0) / e0);
        if (k % 10 == 0) {
          const auto [bu, bv] = wave_coefficients(basis, u, v, -t);
          const EdgeState du = basis.synthesize(bu - f), dv = basis.synthesize(bv - v0);
          worst_reverse = std::max({worst_reverse, norm_inf(du), norm_inf(dv)});
        }
      }
    }
  }
  o.require(worst_energy <= 1e-8, "energy drift " + num(worst_energy));
  o.require(worst_reverse <= 1e-10, "reversal error " + num(worst_reverse));
  o.detail << "relative energy drift " << num(worst_energy) << " on [0,10], reversal error " << num(worst_reverse);
  return o;
}

// 8. connectivity bounds and the lambda2 formula on all graphs with n <= 7.
Outcome bounds_enumeration() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t graphs = 0, regular = 0, bound_failures = 0, formula_failures = 0;
  double worst = 0.0;
  for (std::size_t n = 3; n <= 7; ++n) {
    graphs += for_each_graph(n, {}, [&](const MetricGraph& g) {
      const double nu2 = graph_params(g).nu2();
      const double slack = 1e-12 * std::max(1.0, nu2);
      if (nu2_bound_edge_connectivity(g) > nu2 + slack || nu2_bound_diameter(g) > nu2 + slack) ++bound_failures;
      if (g.regular_degree()) {
        ++regular;
        const double diff = std::abs(lambda2_regular(g) - lambda2_spectral(g));
        worst = std::max(worst, diff);
        if (diff > 1e-10) ++formula_failures;
      }
    });
  }
  const double elapsed = seconds_since(start);
  o.require(bound_failures == 0, std::to_string(bound_failures) + " bound failures");
  o.require(formula_failures == 0, std::to_string(formula_failures) + " formula mismatches");
  o.require(elapsed <= 300.0, "runtime " + num(elapsed) + " s");
  o.detail << graphs << " graphs (" << regular << " regular), max lambda2 difference " << num(worst) << ", "
           << num(elapsed) << " s";
  return o;
}

// 9. two-speed cycle: secular scan vs extrapolated finite elements.
Outcome two_speed() {
  Outcome o;
  const MetricGraph g = validate(RawGraph{{"v1", "v2", "v3", "v4"},
                                          {{"e1", "v1", "v2", 1.0, 1.0},
                                           {"e2", "v2", "v3", 1.0, 1.0},
                                           {"e3", "v3", "v4", 4.0, 1.0},
                                           {"e4", "v4", "v1", 4.0, 1.0}}});
  const auto exact = secular_spectrum(g, 45.0).expanded();
  const auto coarse = oracle_eigs(assemble(g, 1.0 / 100), exact.size()).values;
  const auto fine = oracle_eigs(assemble(g, 1.0 / 200), exact.size()).values;
  double worst = 0.0;
  for (std::size_t k = 0; k < exact.size(); ++k) {
    const double extrapolated = richardson(coarse[k], fine[k]);
    const double err = std::abs(extrapolated - exact[k]) / std::max(1.0, exact[k]);
    worst = std::max(worst, err);
  }
  o.require(worst <= 1e-3, "max rel err " + num(worst));
  o.require(exact.size() >= 7, "only " + std::to_string(exact.size()) + " eigenvalues below 45");
  o.detail << exact.size() << " eigenvalues up to 45, max rel err after extrapolation " << num(worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"closed form vs finite-element oracle", closed_form_vs_oracle},
      {"multiplicities of k^2 pi^2", multiplicities},
      {"generalized matrices: entrywise vs incidence products", incidence_identity},
      {"heat decay rates", decay_rates},
      {"semigroup properties", semigroup_properties},
      {"ultracontractivity constant", ultracontractivity},
      {"wave energy and time reversal", wave},
      {"connectivity bounds and lambda2 formula, n <= 7", bounds_enumeration},
      {"two-speed cycle vs extrapolated oracle", two_speed},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first << ": " << o.detail.str()
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
