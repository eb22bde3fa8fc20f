#include "qgraph/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

EigenBasis::EigenBasis(const MetricGraph& g, const SpectrumReport& report, std::size_t grid,
                       double lambda_max)
    : g_(g), grid_(grid) {
  for (const auto& pair : report.pairs) {
    if (pair.lambda > lambda_max) continue;
    for (const auto& f : pair.eigenfunctions) {
      lambdas_.push_back(pair.lambda);
      modes_.push_back(f);
    }
  }
  const std::size_t m = g_.edge_count();
  const Vector w = simpson_weights(grid_);
  samples_.resize(idx(grid_ * m), idx(modes_.size()));
  weights_.resize(idx(grid_ * m));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < grid_; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(grid_ - 1);
      const Index r = idx(j * grid_ + i);
      weights_[r] = g_.edge(j).mu * w[idx(i)];
      for (std::size_t k = 0; k < modes_.size(); ++k) samples_(r, idx(k)) = modes_[k].value(g_, j, x);
    }
  }
  gram_.compute(samples_.transpose() * weights_.asDiagonal() * samples_);

  EigenFunction one;
  one.a = Vector::Ones(idx(m));
  one.b = Vector::Zero(idx(m));
  mode_mass_.resize(idx(modes_.size()));
  for (std::size_t k = 0; k < modes_.size(); ++k) mode_mass_[idx(k)] = inner_product(g_, modes_[k], one);
}

Vector EigenBasis::flatten(const EdgeState& f) const {
  if (f.edge_count() != g_.edge_count()) throw std::invalid_argument("state has the wrong edge count");
  const EdgeState s = f.grid() == grid_ ? f : resample(f, grid_);
  return s.values.reshaped();
}

Vector EigenBasis::project(const EdgeState& f) const {
  return gram_.solve(samples_.transpose() * weights_.asDiagonal() * flatten(f));
}

EdgeState EigenBasis::synthesize(const Vector& c, std::size_t grid) const {
  if (grid == 0 || grid == grid_) {
    EdgeState s(grid_, g_.edge_count());
    s.values.reshaped() = samples_ * c;
    return s;
  }
  return sample(g_, grid, [&](std::size_t j, double x) { return evaluate(c, j, x); });
}

double EigenBasis::completeness_defect(const EdgeState& f) const {
  const Vector v = flatten(f);
  const double fn = std::sqrt(v.dot(weights_.asDiagonal() * v));
  if (fn == 0.0) return 0.0;
  const Vector r = v - samples_ * gram_.solve(samples_.transpose() * weights_.asDiagonal() * v);
  return std::sqrt(r.dot(weights_.asDiagonal() * r)) / fn;
}

Matrix EigenBasis::analytic_gram() const {
  const auto n = idx(modes_.size());
  Matrix gm(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = a; b < n; ++b) {
      gm(a, b) = gm(b, a) = inner_product(g_, modes_[static_cast<std::size_t>(a)], modes_[static_cast<std::size_t>(b)]);
    }
  }
  return gm;
}

double EigenBasis::evaluate(const Vector& c, std::size_t edge, double x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (c[idx(k)] != 0.0) s += c[idx(k)] * modes_[k].value(g_, edge, x);
  }
  return s;
}

double EigenBasis::sup_norm(const Vector& c) const {
  const Vector v = samples_ * c;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const double h = 1.0 / static_cast<double>(grid_ - 1);
  double best = 0.0;
  for (std::size_t j = 0; j < g_.edge_count(); ++j) {
    Index imax = 0;
    v.segment(idx(j * grid_), idx(grid_)).cwiseAbs().maxCoeff(&imax);
    const double xm = static_cast<double>(imax) * h;
    double lo = std::max(0.0, xm - h), hi = std::min(1.0, xm + h);
    auto f = [&](double x) { return std::abs(evaluate(c, j, x)); };
    double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 60; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = f(x1);
      }
    }
    best = std::max({best, f1, f2, std::abs(v[idx(j * grid_) + imax])});
  }
  return best;
}

double EigenBasis::mass(const Vector& c) const { return mode_mass_.dot(c); }

double EigenBasis::energy(const Vector& u, const Vector& v) const {
  double e = v.squaredNorm();
  for (std::size_t k = 0; k < modes_.size(); ++k) e += lambdas_[k] * u[idx(k)] * u[idx(k)];
  return e;
}

EdgeState equilibrium_projection(const MetricGraph& g, const EdgeState& f) {
  const double mean = mass(g, f) / g.total_node_weight();
  EdgeState p(f.grid(), f.edge_count());
  p.values.setConstant(mean);
  return p;
}

namespace {

Vector checked_projection(const EigenBasis& basis, const EdgeState& f, const EvolveOptions& options) {
  const double defect = basis.completeness_defect(f);
  if (defect > options.defect_bound) {
    throw Error(ErrorCode::BasisTooSmall, "completeness defect " + std::to_string(defect) +
                                              " exceeds " + std::to_string(options.defect_bound) +
                                              "; raise lambda_max");
  }
  return basis.project(f);
}

}  // namespace

Vector heat_coefficients(const EigenBasis& basis, const Vector& c, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("heat evolution needs t >= 0");
  Vector out = c;
  for (std::size_t k = 0; k < basis.size(); ++k) out[idx(k)] *= std::exp(-basis.lambdas()[k] * t);
  return out;
}

EdgeState heat_evolve(const EigenBasis& basis, const EdgeState& f, double t, const EvolveOptions& options) {
  return basis.synthesize(heat_coefficients(basis, checked_projection(basis, f, options), t));
}

Series heat_series(const EigenBasis& basis, const EdgeState& f, std::span<const double> times,
                   const EvolveOptions& options) {
  const Vector c = checked_projection(basis, f, options);
  Series out;
  for (double t : times) out.push_back({t, basis.synthesize(heat_coefficients(basis, c, t))});
  return out;
}

std::pair<Vector, Vector> wave_coefficients(const EigenBasis& basis, const Vector& f, const Vector& g0,
                                            double t) {
  Vector u(f.size()), v(f.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Index i = idx(k);
    const double lambda = basis.lambdas()[k];
    if (lambda == 0.0) {
      u[i] = f[i] + t * g0[i];
      v[i] = g0[i];
      continue;
    }
    const double w = std::sqrt(lambda);
    const double c = std::cos(w * t), s = std::sin(w * t);
    u[i] = c * f[i] + s / w * g0[i];
    v[i] = -w * s * f[i] + c * g0[i];
  }
  return {u, v};
}

std::pair<EdgeState, EdgeState> wave_evolve(const EigenBasis& basis, const EdgeState& f,
                                            const EdgeState& g0, double t, const EvolveOptions& options) {
  const auto [u, v] =
      wave_coefficients(basis, checked_projection(basis, f, options), checked_projection(basis, g0, options), t);
  return {basis.synthesize(u), basis.synthesize(v)};
}

namespace {

// Fourth-order first derivative on a uniform grid of [0,1].
Vector derivative4(const Eigen::Ref<const Vector>& u) {
  const Index n = u.size();
  if (n < 5) throw std::invalid_argument("energy needs at least 5 grid points");
  const double h = 1.0 / static_cast<double>(n - 1);
  Vector d(n);
  d[0] = (-25 * u[0] + 48 * u[1] - 36 * u[2] + 16 * u[3] - 3 * u[4]) / (12 * h);
  d[1] = (-3 * u[0] - 10 * u[1] + 18 * u[2] - 6 * u[3] + u[4]) / (12 * h);
  for (Index i = 2; i < n - 2; ++i) d[i] = (u[i - 2] - 8 * u[i - 1] + 8 * u[i + 1] - u[i + 2]) / (12 * h);
  d[n - 2] = (3 * u[n - 1] + 10 * u[n - 2] - 18 * u[n - 3] + 6 * u[n - 4] - u[n - 5]) / (12 * h);
  d[n - 1] = (25 * u[n - 1] - 48 * u[n - 2] + 36 * u[n - 3] - 16 * u[n - 4] + 3 * u[n - 5]) / (12 * h);
  return d;
}

}  // namespace

double energy(const MetricGraph& g, const EdgeState& u, const EdgeState& v) {
  const Vector w = simpson_weights(u.grid());
  double e = 0.0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const Vector du = derivative4(u.values.col(idx(j)));
    e += g.edge(j).mu * g.edge(j).c * w.dot(du.cwiseAbs2());
  }
  return e + inner_product(g, v, v);
}

PositivityReport check_positivity(const MetricGraph& g, const Series& series, const PositivityOptions& options) {
  PositivityReport r;
  if (series.empty()) return r;
  const EdgeState& u0 = series.front().u;
  r.positivity_checked = grid_min(u0) >= 0.0;
  r.initial_sup = options.initial_sup.value_or(norm_inf(u0));
  r.min_value = grid_min(u0);
  const double sup_tol = options.tol * std::max(1.0, r.initial_sup);
  double prev_l2 = norm2(g, u0);
  const double l2_tol = options.tol * std::max(1.0, prev_l2);
  for (const auto& snap : series) {
    const double mn = grid_min(snap.u);
    const double sup = norm_inf(snap.u);
    const double l2 = norm2(g, snap.u);
    r.min_value = std::min(r.min_value, mn);
    r.max_sup = std::max(r.max_sup, sup);
    if (r.positivity_checked && mn < -options.tol) r.positivity_violations.push_back(snap.t);
    if (sup > r.initial_sup + sup_tol) r.contraction_violations.push_back(snap.t);
    if (l2 > prev_l2 + l2_tol) r.l2_violations.push_back(snap.t);
    prev_l2 = std::min(prev_l2, l2);
  }
  return r;
}

double ultracontractivity_ratio(const EigenBasis& basis, const Vector& f, double t, std::size_t grid) {
  if (!(t > 0.0)) throw std::invalid_argument("ultracontractivity ratio needs t > 0");
  const double fn = basis.norm(f);
  if (fn == 0.0) throw std::invalid_argument("ultracontractivity ratio needs f != 0");
  const EdgeState u = basis.synthesize(heat_coefficients(basis, f, t), grid);
  return std::pow(t, 0.25) * norm_inf(u) / fn;
}

double ultracontractivity_ratio(const EigenBasis& basis, const EdgeState& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("ultracontractivity ratio needs t > 0");
  const double fn = norm2(basis.graph(), f);
  const EdgeState u = basis.synthesize(heat_coefficients(basis, basis.project(f), t));
  return std::pow(t, 0.25) * norm_inf(u) / fn;
}

double decay_rate_fit(std::span<const double> t, std::span<const double> distance, double skip_fraction) {
  if (t.size() != distance.size()) throw std::invalid_argument("time and distance lengths differ");
  const auto first = static_cast<std::size_t>(std::floor(skip_fraction * static_cast<double>(t.size())));
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < t.size(); ++i) {
    if (!(distance[i] > 1e-12)) {
      throw Error(ErrorCode::DegenerateSeries, "distance to equilibrium " + std::to_string(distance[i]) +
                                                   " at t = " + std::to_string(t[i]) + " is too small to fit");
    }
    xs.push_back(t[i]);
    ys.push_back(std::log(distance[i]));
  }
  if (xs.size() < 10) {
    throw Error(ErrorCode::DegenerateSeries, "need at least 10 snapshots after skipping, have " +
                                                 std::to_string(xs.size()));
  }
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double decay_rate_fit(const MetricGraph& g, const Series& series, const EdgeState& projected, double skip_fraction) {
  std::vector<double> t, d;
  for (const auto& s : series) {
    EdgeState diff = s.u;
    diff.values -= projected.values;
    t.push_back(s.t);
    d.push_back(norm2(g, diff));
  }
  return decay_rate_fit(t, d, skip_fraction);
}

EdgeState bump_state(const MetricGraph& g, std::size_t grid, std::size_t edge) {
  if (edge >= g.edge_count()) throw std::out_of_range("bump edge index out of range");
  return sample(g, grid, [&](std::size_t j, double x) {
    if (j != edge) return 0.0;
    const double s = std::sin(std::numbers::pi * x);
    return s * s * s * s;
  });
}

EdgeState constant_state(const MetricGraph& g, std::size_t grid, double value) {
  EdgeState s(grid, g.edge_count());
  s.values.setConstant(value);
  return s;
}

Vector random_coefficients(const EigenBasis& basis, std::mt19937_64& rng, double lambda_cap) {
  std::normal_distribution<double> normal;
  Vector c = Vector::Zero(idx(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double z = normal(rng);
    if (basis.lambdas()[k] <= lambda_cap) c[idx(k)] = z;
  }
  return c;
}

Vector random_nonnegative_coefficients(const EigenBasis& basis, std::mt19937_64& rng, double lambda_cap) {
  Vector c = random_coefficients(basis, rng, lambda_cap);
  const EdgeState fine = basis.synthesize(c, 10 * (basis.grid() - 1) + 1);
  const double lo = fine.values.minCoeff();
  const double hi = fine.values.maxCoeff();
  const double shift = -lo + 1e-4 * (hi - lo);
  // the constant mode is 1 / sqrt(total weight)
  c[0] += shift * std::sqrt(basis.graph().total_node_weight());
  return c;
}

}  // namespace qgraph
