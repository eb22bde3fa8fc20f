#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qgraph/qgraph.hpp"

namespace qgraph::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string graph;
  double lambda_max = 42.0;
  std::optional<double> oracle_h;
  bool closed_form = false;
  bool scan = false;
  std::string json_path;
  std::string kind = "heat";
  std::string f_spec = "bump:0";
  std::string g_spec = "zero";
  double dt = 0.01;
  double T = 2.0;
  std::size_t stride = 10;
  std::size_t grid = 501;
  double evolve_lambda_max = 1600.0;
  double defect_bound = 1e-3;
  double eps = 0.01;
  bool fit = false;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir = ".";
  SpectralTolerances tol;
};

std::string short_number(double v) {
  std::ostringstream s;
  s.precision(12);
  s << (v == 0.0 ? 0.0 : v);
  return s.str();
}

json manifest(const RunConfig& c) {
  json m;
  m["command"] = c.command;
  m["graph"] = c.graph;
  if (c.command == "spectrum") {
    m["lambda_max"] = c.lambda_max;
    m["oracle_h"] = c.oracle_h ? json(*c.oracle_h) : json(nullptr);
    m["closed_form"] = c.closed_form;
    m["scan"] = c.scan;
    m["json"] = c.json_path;
  }
  if (c.command == "evolve") {
    m["kind"] = c.kind;
    m["f"] = c.f_spec;
    m["g"] = c.g_spec;
    m["dt"] = c.dt;
    m["T"] = c.T;
    m["stride"] = c.stride;
    m["grid"] = c.grid;
    m["lambda_max"] = c.evolve_lambda_max;
    m["defect_bound"] = c.defect_bound;
  }
  if (c.command == "stability") {
    m["eps"] = c.eps;
    m["fit"] = c.fit;
  }
  m["seed"] = c.seed;
  m["jobs"] = c.jobs;
  m["out"] = c.out_dir;
  m["tolerances"] = {{"singular_window", c.tol.singular_window}, {"kernel_rel", c.tol.kernel_rel},
                     {"root_abs", c.tol.root_abs},               {"merge_rel", c.tol.merge_rel},
                     {"kernel_residual", c.tol.kernel_residual}};
  return m;
}

std::ofstream open_output(const RunConfig& c, const std::string& name) {
  fs::create_directories(c.out_dir);
  std::ofstream f(fs::path(c.out_dir) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (fs::path(c.out_dir) / name).string());
  return f;
}

void write_manifest(const RunConfig& c) { open_output(c, "manifest.json") << manifest(c).dump(2) << '\n'; }

MetricGraph load(const RunConfig& c) { return validate(read_graph_file(c.graph)); }

ScanOptions scan_options(const RunConfig& c) { return {c.tol, c.jobs}; }

// --- validate --------------------------------------------------------------

int cmd_validate(const RunConfig& c, std::ostream& out) {
  const MetricGraph g = load(c);
  const GraphParams p = graph_params(g);
  out << "n=" << g.vertex_count() << " m=" << g.edge_count() << ' ';
  if (p.gamma) {
    out << "regular γ=" << *p.gamma;
  } else {
    out << "irregular";
  }
  out << " bipartite=" << (p.bipartition ? "yes" : "no") << " η=" << p.eta << " diam=" << p.diam
      << " ν₂=" << short_number(p.nu2()) << '\n';
  out << "degrees=";
  for (std::size_t i = 0; i < p.degree.size(); ++i) out << (i ? "," : "") << p.degree[i];
  out << '\n';
  write_manifest(c);
  return kOk;
}

// --- spectrum --------------------------------------------------------------

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const MetricGraph g = load(c);
  SpectrumReport r;
  if (c.closed_form) {
    r = unit_speed_spectrum(g, c.lambda_max, c.tol);
  } else if (c.scan) {
    r = secular_spectrum(g, c.lambda_max, scan_options(c));
  } else {
    r = spectrum(g, c.lambda_max, scan_options(c));
  }
  std::optional<OracleColumns> oracle;
  if (c.oracle_h) {
    const auto expanded = r.expanded();
    const Discretization d = assemble(g, *c.oracle_h);
    const OracleSpectrum os = oracle_eigs(d, expanded.size());
    OracleColumns cols;
    std::size_t pos = 0;
    for (const auto& p : r.pairs) {
      double sum = 0.0;
      std::size_t cnt = 0;
      for (std::size_t k = pos; k < pos + p.multiplicity && k < os.values.size(); ++k, ++cnt) sum += os.values[k];
      pos += p.multiplicity;
      const double v = cnt ? sum / static_cast<double>(cnt) : std::nan("");
      cols.oracle_lambda.push_back(v);
      cols.discrepancy.push_back(v - p.lambda);
    }
    oracle = std::move(cols);
  }
  std::ostringstream csv;
  write_spectrum_csv(csv, r, oracle);
  out << csv.str();
  open_output(c, "spectrum.csv") << csv.str();
  if (!c.json_path.empty()) {
    const fs::path p = fs::path(c.json_path).is_absolute() ? fs::path(c.json_path) : fs::path(c.out_dir) / c.json_path;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    write_spectrum_json(f, g, r);
  }
  write_manifest(c);
  return kOk;
}

// --- evolve --------------------------------------------------------------

std::size_t edge_index(const MetricGraph& g, const std::string& key) {
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    if (g.edge(j).id == key) return j;
  }
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(key, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != key.size() || v >= g.edge_count()) throw std::invalid_argument("unknown edge '" + key + "'");
  return v;
}

Vector initial_coefficients(const EigenBasis& basis, const std::string& spec, std::mt19937_64& rng,
                            const EvolveOptions& opts) {
  const MetricGraph& g = basis.graph();
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto checked = [&](const EdgeState& s) {
    const double defect = basis.completeness_defect(s);
    if (defect > opts.defect_bound) {
      throw Error(ErrorCode::BasisTooSmall, "initial state '" + spec + "' has completeness defect " +
                                                std::to_string(defect) + "; raise --lambda-max");
    }
    return basis.project(s);
  };
  if (head == "zero") return Vector::Zero(static_cast<Eigen::Index>(basis.size()));
  if (head == "constant") return checked(constant_state(g, basis.grid(), arg.empty() ? 1.0 : std::stod(arg)));
  if (head == "bump") return checked(bump_state(g, basis.grid(), edge_index(g, arg.empty() ? "0" : arg)));
  if (head == "mode") {
    const std::size_t k = std::stoul(arg);
    if (k >= basis.size()) throw std::invalid_argument("mode index beyond the basis size " + std::to_string(basis.size()));
    Vector c = Vector::Zero(static_cast<Eigen::Index>(basis.size()));
    c[static_cast<Eigen::Index>(k)] = 1.0;
    return c;
  }
  if (head == "random") return random_nonnegative_coefficients(basis, rng);
  throw std::invalid_argument("unknown initial state '" + spec + "'");
}

int cmd_evolve(const RunConfig& c, std::ostream& out) {
  if (!(c.dt > 0.0) || !(c.T >= 0.0) || c.stride == 0) throw std::invalid_argument("need dt > 0, T >= 0, stride >= 1");
  const MetricGraph g = load(c);
  const SpectrumReport r = spectrum(g, c.evolve_lambda_max, scan_options(c));
  const EigenBasis basis(g, r, c.grid);
  std::mt19937_64 rng(c.seed);
  const EvolveOptions opts{c.defect_bound};
  const Vector cf = initial_coefficients(basis, c.f_spec, rng, opts);
  const Vector cg = initial_coefficients(basis, c.g_spec, rng, opts);
  const auto steps = static_cast<std::size_t>(std::llround(c.T / c.dt));

  Series snapshots;
  if (c.kind == "heat") {
    Series all;
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) * c.dt;
      all.push_back({t, basis.synthesize(heat_coefficients(basis, cf, t))});
      if (k % c.stride == 0 || k == steps) snapshots.push_back(all.back());
    }
    const double lambda2 = -r.first_positive().value_or(0.0);
    auto rates = open_output(c, "rates.txt");
    const EdgeState pf = equilibrium_projection(g, basis.synthesize(cf));
    try {
      const double slope = decay_rate_fit(g, all, pf);
      rates << "slope " << format_number(slope) << '\n'
            << "lambda2 " << format_number(lambda2) << '\n'
            << "relative_error " << format_number(std::abs(slope - lambda2) / std::abs(lambda2)) << '\n';
      out << "slope=" << short_number(slope) << " lambda2=" << short_number(lambda2) << '\n';
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSeries) throw;
      rates << "slope n/a\nlambda2 " << format_number(lambda2) << "\nrelative_error n/a\n"
            << "note " << e.what() << '\n';
      out << "slope=n/a lambda2=" << short_number(lambda2) << '\n';
    }
  } else if (c.kind == "wave") {
    auto energy_csv = open_output(c, "energy.csv");
    energy_csv << "t,energy,energy_grid\n";
    double e0 = 0.0, drift = 0.0;
    for (std::size_t k = 0; k <= steps; ++k) {
      const double t = static_cast<double>(k) * c.dt;
      const auto [u, v] = wave_coefficients(basis, cf, cg, t);
      if (k % c.stride == 0 || k == steps) {
        const EdgeState us = basis.synthesize(u);
        const double e = basis.energy(u, v);
        if (k == 0) e0 = e;
        drift = std::max(drift, std::abs(e - e0));
        energy_csv << format_number(t) << ',' << format_number(e) << ','
                   << format_number(energy(g, us, basis.synthesize(v))) << '\n';
        snapshots.push_back({t, us});
      }
    }
    out << "energy=" << short_number(e0) << " drift=" << short_number(drift) << '\n';
  } else {
    throw std::invalid_argument("--kind must be heat or wave");
  }
  {
    auto f = open_output(c, "snapshots.csv");
    write_snapshots_csv(f, g, snapshots);
  }
  out << "modes=" << basis.size() << " snapshots=" << snapshots.size() << '\n';
  write_manifest(c);
  return kOk;
}

// --- stability ----------------------------------------------------------

int cmd_stability(const RunConfig& c, std::ostream& out) {
  const MetricGraph g = load(c);
  std::optional<double> slope;
  if (c.fit) {
    const double lambda2 = lambda2_spectral(g, scan_options(c));
    const SpectrumReport r = spectrum(g, 1600.0, scan_options(c));
    const EigenBasis basis(g, r, c.grid);
    const EdgeState f = bump_state(g, basis.grid(), 0);
    const double T = 8.0 / std::abs(lambda2);
    std::vector<double> times;
    for (int k = 0; k <= 200; ++k) times.push_back(T * k / 200.0);
    const Series s = heat_series(basis, f, times);
    slope = decay_rate_fit(g, s, equilibrium_projection(g, f));
  }
  const StabilityReport rep = stability_report(g, c.eps, slope, scan_options(c));
  write_stability_text(out, rep);
  {
    auto f = open_output(c, "stability.csv");
    write_stability_csv(f, rep);
  }
  write_manifest(c);
  return rep.ok() ? kOk : kDomainError;
}

// --- selftest -----------------------------------------------------------

int cmd_selftest(const RunConfig& c, std::ostream& out) {
  int failures = 0;
  auto check = [&](const std::string& name, const std::function<bool()>& fn) {
    bool ok = false;
    std::string note;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      note = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << note << '\n';
    failures += ok ? 0 : 1;
  };
  const std::vector<std::pair<std::string, MetricGraph>> graphs{
      {"K3", complete_graph(3)}, {"C4", cycle_graph(4)}, {"K4", complete_graph(4)}};
  for (const auto& [name, g] : graphs) {
    check(name + " laplacian rows sum to zero", [&] { return laplacian(g).rowwise().sum().cwiseAbs().maxCoeff() < 1e-14; });
    check(name + " incidence identity", [&] {
      std::mt19937_64 rng(c.seed);
      std::uniform_real_distribution<double> u(0.1, 30.0);
      for (int i = 0; i < 20; ++i) {
        const double lambda = u(rng);
        if (is_singular(g, lambda)) continue;
        const double da = (generalized_adjacency(g, lambda) - generalized_adjacency_incidence(g, lambda)).cwiseAbs().maxCoeff();
        const double dd = (generalized_degree(g, lambda) - generalized_degree_incidence(g, lambda)).cwiseAbs().maxCoeff();
        if (da > 1e-12 || dd > 1e-12) return false;
      }
      return true;
    });
    check(name + " closed form matches secular scan", [&] {
      const auto a = unit_speed_spectrum(g, 40.0, c.tol).expanded();
      const auto b = secular_spectrum(g, 40.0, scan_options(c)).expanded();
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-8) return false;
      }
      return true;
    });
    check(name + " eigenfunctions satisfy vertex conditions", [&] {
      for (const auto& p : spectrum(g, 40.0, scan_options(c)).pairs) {
        for (const auto& f : p.eigenfunctions) {
          const DomainDefect d = domain_defect(g, f);
          if (d.continuity > 1e-10 || d.kirchhoff > 1e-10 || d.residual > 1e-8) return false;
        }
      }
      return true;
    });
    check(name + " nu2 bounds hold", [&] {
      const double nu2 = graph_params(g).nu2();
      return nu2_bound_edge_connectivity(g) <= nu2 && nu2_bound_diameter(g) <= nu2;
    });
    check(name + " lambda2 formula matches spectrum", [&] {
      return std::abs(lambda2_regular(g) - lambda2_spectral(g)) < 1e-10;
    });
  }
  write_manifest(c);
  out << (failures == 0 ? "all checks passed" : std::to_string(failures) + " checks failed") << '\n';
  return failures == 0 ? kOk : kDomainError;
}

int exit_code_for(const Error& e) {
  return (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::UnknownField) ? kUsageError : kDomainError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Spectra and evolution equations on metric graphs", "qgraph"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qgraph 0.1.0");

  auto common = [&](CLI::App* sub, bool needs_graph) {
    if (needs_graph) sub->add_option("graph", c.graph, "Graph file (JSON)")->required();
    sub->add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    sub->add_option("--jobs", c.jobs, "Worker threads for the secular scan")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--kernel-tol", c.tol.kernel_rel, "Relative singular-value cutoff for kernels")->check(CLI::PositiveNumber);
    sub->add_option("--singular-window", c.tol.singular_window, "Exclusion window around c_j l^2 pi^2")->check(CLI::PositiveNumber);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Validate a graph file and print its parameters");
  common(validate_cmd, true);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Eigenvalues up to a cutoff as CSV");
  common(spectrum_cmd, true);
  spectrum_cmd->add_option("--lambda-max", c.lambda_max, "Cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  spectrum_cmd->add_option("--oracle", c.oracle_h, "Append finite-element eigenvalues with mesh width h")->check(CLI::PositiveNumber);
  auto* cf = spectrum_cmd->add_flag("--closed-form", c.closed_form, "Require the unit-speed closed form");
  spectrum_cmd->add_flag("--scan", c.scan, "Use the secular scan even for unit speeds")->excludes(cf);
  spectrum_cmd->add_option("--json", c.json_path, "Also write eigenfunction coefficients as JSON");

  auto* evolve_cmd = app.add_subcommand("evolve", "Heat or wave evolution by eigenfunction expansion");
  common(evolve_cmd, true);
  evolve_cmd->add_option("--kind", c.kind, "heat or wave")->check(CLI::IsMember({"heat", "wave"}))->capture_default_str();
  evolve_cmd->add_option("--f", c.f_spec, "Initial value: zero | constant[:v] | bump:EDGE | mode:K | random")->capture_default_str();
  evolve_cmd->add_option("--g", c.g_spec, "Initial velocity (wave), same forms")->capture_default_str();
  evolve_cmd->add_option("--dt", c.dt, "Time step")->check(CLI::PositiveNumber)->capture_default_str();
  evolve_cmd->add_option("--T", c.T, "Final time")->check(CLI::NonNegativeNumber)->capture_default_str();
  evolve_cmd->add_option("--stride", c.stride, "Steps between snapshots")->check(CLI::PositiveNumber)->capture_default_str();
  evolve_cmd->add_option("--grid", c.grid, "Grid points per edge (odd)")->check(CLI::Range(5, 100001))->capture_default_str();
  evolve_cmd->add_option("--lambda-max", c.evolve_lambda_max, "Basis cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  evolve_cmd->add_option("--defect-bound", c.defect_bound, "Largest accepted completeness defect")->check(CLI::PositiveNumber)->capture_default_str();

  auto* stability_cmd = app.add_subcommand("stability", "Convergence-rate report and bound checks");
  common(stability_cmd, true);
  stability_cmd->add_option("--eps", c.eps, "Slack added to lambda2")->check(CLI::PositiveNumber)->capture_default_str();
  stability_cmd->add_flag("--fit", c.fit, "Fit the decay rate of a heat run and check it");
  stability_cmd->add_option("--grid", c.grid, "Grid points per edge for --fit")->check(CLI::Range(5, 100001))->capture_default_str();

  auto* selftest_cmd = app.add_subcommand("selftest", "Invariant checks on built-in graphs");
  common(selftest_cmd, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "qgraph 0.1.0\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  c.command = app.get_subcommands().front()->get_name();
  try {
    if (c.command == "validate") return cmd_validate(c, out);
    if (c.command == "spectrum") return cmd_spectrum(c, out);
    if (c.command == "evolve") return cmd_evolve(c, out);
    if (c.command == "stability") return cmd_stability(c, out);
    return cmd_selftest(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace qgraph::cli
