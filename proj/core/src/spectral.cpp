#include "qgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qgraph/error.hpp"

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

double theta(const Edge& e, double lambda) { return std::sqrt(lambda / e.c); }

// --- closed-form integrals on [0,1] -------------------------------------

// int_0^1 cos(w x) dx
double int_cos(double w) {
  if (std::abs(w) < 1e-4) return 1.0 - w * w / 6.0;
  return std::sin(w) / w;
}

// int_0^1 sin(w x) dx
double int_sin(double w) {
  if (std::abs(w) < 1e-4) return w / 2.0 - w * w * w / 24.0;
  return (1.0 - std::cos(w)) / w;
}

// int_0^1 x cos(w x) dx
double int_x_cos(double w) {
  if (std::abs(w) < 1e-4) return 0.5 - w * w / 8.0;
  return std::sin(w) / w + (std::cos(w) - 1.0) / (w * w);
}

// int_0^1 x sin(w x) dx
double int_x_sin(double w) {
  if (std::abs(w) < 1e-4) return w / 3.0 - w * w * w / 30.0;
  return std::sin(w) / (w * w) - std::cos(w) / w;
}

enum class Term { Cos, Sin, X };

struct Piece {
  double coef;
  Term kind;
  double freq;
};

void pieces(const EigenFunction& f, const MetricGraph& g, std::size_t j, Piece out[2]) {
  const auto jj = idx(j);
  if (f.lambda == 0.0) {
    out[0] = {f.a[jj], Term::Cos, 0.0};
    out[1] = {f.b[jj], Term::X, 0.0};
  } else {
    const double t = theta(g.edge(j), f.lambda);
    out[0] = {f.a[jj], Term::Cos, t};
    out[1] = {f.b[jj], Term::Sin, t};
  }
}

double integrate_product(const Piece& u, const Piece& v) {
  const double p = u.freq, q = v.freq;
  if (u.kind == Term::X && v.kind == Term::X) return 1.0 / 3.0;
  if (u.kind == Term::X) return v.kind == Term::Cos ? int_x_cos(q) : int_x_sin(q);
  if (v.kind == Term::X) return u.kind == Term::Cos ? int_x_cos(p) : int_x_sin(p);
  if (u.kind == Term::Cos && v.kind == Term::Cos) return 0.5 * (int_cos(p - q) + int_cos(p + q));
  if (u.kind == Term::Sin && v.kind == Term::Sin) return 0.5 * (int_cos(p - q) - int_cos(p + q));
  // sin(p x) cos(q x) = (sin((p+q)x) + sin((p-q)x)) / 2
  const double s = u.kind == Term::Sin ? p : q;
  const double c = u.kind == Term::Sin ? q : p;
  return 0.5 * (int_sin(s + c) + int_sin(s - c));
}

// --- singular set --------------------------------------------------------

// Distance of sqrt(lambda / c) from the nearest positive multiple of pi,
// together with that multiple.
std::pair<double, long> pole_distance(double t) {
  const long l = std::max(1L, std::lround(t / kPi));
  return {std::abs(t - static_cast<double>(l) * kPi), l};
}

void require_admissible(const MetricGraph& g, double lambda, double window) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::SingularLambda, "lambda must be positive, got " + std::to_string(lambda));
  }
  if (is_singular(g, lambda, window)) {
    throw Error(ErrorCode::SingularLambda,
                "lambda = " + std::to_string(lambda) + " is within the exclusion window of c_j l^2 pi^2");
  }
}

// --- eigenspace bookkeeping ---------------------------------------------

void fix_sign(EigenFunction& f) {
  const Index m = f.a.size();
  for (Index k = 0; k < 2 * m; ++k) {
    const double v = k < m ? f.a[k] : f.b[k - m];
    if (std::abs(v) > 1e-12) {
      if (v < 0.0) {
        f.a = -f.a;
        f.b = -f.b;
        if (f.vertex_values) *f.vertex_values = -*f.vertex_values;
      }
      return;
    }
  }
}

// Modified Gram-Schmidt in X_2. Drops numerically dependent members.
std::vector<EigenFunction> orthonormalize(const MetricGraph& g, std::vector<EigenFunction> fs) {
  std::vector<EigenFunction> out;
  double scale = 0.0;
  for (const auto& f : fs) scale = std::max(scale, std::sqrt(inner_product(g, f, f)));
  for (auto& f : fs) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : out) {
        const double r = inner_product(g, f, q);
        f.a -= r * q.a;
        f.b -= r * q.b;
        if (f.vertex_values && q.vertex_values) *f.vertex_values -= r * *q.vertex_values;
      }
    }
    const double nrm = std::sqrt(inner_product(g, f, f));
    if (nrm <= 1e-9 * std::max(scale, 1.0)) continue;
    f.a /= nrm;
    f.b /= nrm;
    if (f.vertex_values) *f.vertex_values /= nrm;
    out.push_back(std::move(f));
  }
  for (auto& f : out) fix_sign(f);
  return out;
}

EigenPair zero_pair(const MetricGraph& g) {
  EigenFunction f;
  f.lambda = 0.0;
  const double v = 1.0 / std::sqrt(g.total_node_weight());
  f.a = Vector::Constant(idx(g.edge_count()), v);
  f.b = Vector::Zero(idx(g.edge_count()));
  f.vertex_values = Vector::Constant(idx(g.vertex_count()), v);
  return {0.0, 1, EigenClass::Zero, {f}};
}

std::vector<EigenPair> merge_pairs(const MetricGraph& g, std::vector<EigenPair> pairs,
                                   double merge_rel) {
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& x, const EigenPair& y) { return x.lambda < y.lambda; });
  std::vector<EigenPair> out;
  for (auto& p : pairs) {
    if (!out.empty() && std::abs(p.lambda - out.back().lambda) <= merge_rel * (1.0 + p.lambda)) {
      EigenPair& q = out.back();
      if (p.eigen_class == EigenClass::SigmaC) {
        q.lambda = p.lambda;
        q.eigen_class = EigenClass::SigmaC;
      }
      for (auto& f : p.eigenfunctions) {
        f.lambda = q.lambda;
        q.eigenfunctions.push_back(std::move(f));
      }
      for (auto& f : q.eigenfunctions) f.lambda = q.lambda;
      q.eigenfunctions = orthonormalize(g, std::move(q.eigenfunctions));
      q.multiplicity = q.eigenfunctions.size();
      continue;
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::size_t count_negative(const Matrix& l) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(l, Eigen::EigenvaluesOnly);
  std::size_t neg = 0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) neg += es.eigenvalues()[i] < 0.0 ? 1 : 0;
  return neg;
}

struct Interval {
  double lo;
  double hi;
  bool from_zero;  // left end is lambda = 0
};

}  // namespace

// --- EigenFunction --------------------------------------------------------

double EigenFunction::value(const MetricGraph& g, std::size_t edge, double x) const {
  const auto j = idx(edge);
  if (lambda == 0.0) return a[j] + b[j] * x;
  const double t = theta(g.edge(edge), lambda);
  return a[j] * std::cos(t * x) + b[j] * std::sin(t * x);
}

double EigenFunction::derivative(const MetricGraph& g, std::size_t edge, double x) const {
  const auto j = idx(edge);
  if (lambda == 0.0) return b[j];
  const double t = theta(g.edge(edge), lambda);
  return t * (-a[j] * std::sin(t * x) + b[j] * std::cos(t * x));
}

double EigenFunction::second_derivative(const MetricGraph& g, std::size_t edge, double x) const {
  if (lambda == 0.0) return 0.0;
  const double t = theta(g.edge(edge), lambda);
  return -t * t * value(g, edge, x);
}

double inner_product(const MetricGraph& g, const EigenFunction& f, const EigenFunction& h) {
  double total = 0.0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    Piece pf[2], ph[2];
    pieces(f, g, j, pf);
    pieces(h, g, j, ph);
    double s = 0.0;
    for (const auto& u : pf) {
      if (u.coef == 0.0) continue;
      for (const auto& v : ph) {
        if (v.coef == 0.0) continue;
        s += u.coef * v.coef * integrate_product(u, v);
      }
    }
    total += g.edge(j).mu * s;
  }
  return total;
}

const char* to_string(EigenClass c) noexcept {
  switch (c) {
    case EigenClass::Zero: return "zero";
    case EigenClass::SigmaL: return "sigma_L";
    case EigenClass::SigmaC: return "sigma_C";
  }
  return "?";
}

const char* to_string(SpectrumMethod m) noexcept {
  return m == SpectrumMethod::SecularScan ? "secular-scan" : "unit-speed-closed-form";
}

std::vector<double> SpectrumReport::expanded() const {
  std::vector<double> out;
  for (const auto& p : pairs) out.insert(out.end(), p.multiplicity, p.lambda);
  return out;
}

std::optional<double> SpectrumReport::first_positive() const {
  for (const auto& p : pairs) {
    if (p.lambda > 0.0) return p.lambda;
  }
  return std::nullopt;
}

// --- generalized matrices ---------------------------------------------------

bool is_singular(const MetricGraph& g, double lambda, double window) {
  if (lambda <= 0.0) return false;
  for (const auto& e : g.edges()) {
    if (pole_distance(theta(e, lambda)).first < window) return true;
  }
  return false;
}

std::vector<double> singular_points(const MetricGraph& g, double lambda_max) {
  std::vector<double> pts;
  for (const auto& e : g.edges()) {
    for (long l = 1;; ++l) {
      const double v = e.c * std::pow(static_cast<double>(l) * kPi, 2);
      if (v > lambda_max) break;
      pts.push_back(v);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double v : pts) {
    if (out.empty() || v - out.back() > 1e-12 * v) out.push_back(v);
  }
  return out;
}

Matrix generalized_adjacency(const MetricGraph& g, double lambda, double window) {
  require_admissible(g, lambda, window);
  const auto n = idx(g.vertex_count());
  Matrix a = Matrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    const double v = e.mu * std::sqrt(e.c) / std::sin(theta(e, lambda));
    a(idx(e.tail), idx(e.head)) += v;
    a(idx(e.head), idx(e.tail)) += v;
  }
  return a;
}

Matrix generalized_degree(const MetricGraph& g, double lambda, double window) {
  require_admissible(g, lambda, window);
  const auto n = idx(g.vertex_count());
  Matrix d = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    double s = 0.0;
    for (std::size_t j : g.incident_edges(i)) {
      const Edge& e = g.edge(j);
      const double t = theta(e, lambda);
      s += e.mu * std::sqrt(e.c) * std::cos(t) / std::sin(t);
    }
    d(idx(i), idx(i)) = s;
  }
  return d;
}

namespace {

struct IncidenceFactors {
  IncidenceSet inc;
  Vector c_inv_sqrt;
  Vector sin_inv;
  Vector cot;
};

IncidenceFactors incidence_factors(const MetricGraph& g, double lambda) {
  IncidenceFactors f{incidence(g), Vector(idx(g.edge_count())), Vector(idx(g.edge_count())),
                 Vector(idx(g.edge_count()))};
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const Edge& e = g.edge(j);
    const double x = std::sqrt(lambda) / std::sqrt(e.c);
    f.c_inv_sqrt[idx(j)] = 1.0 / std::sqrt(e.c);
    f.sin_inv[idx(j)] = 1.0 / std::sin(x);
    f.cot[idx(j)] = std::cos(x) / std::sin(x);
  }
  return f;
}

}  // namespace

Matrix generalized_adjacency_incidence(const MetricGraph& g, double lambda, double window) {
  require_admissible(g, lambda, window);
  const IncidenceFactors f = incidence_factors(g, lambda);
  const Vector diag = f.c_inv_sqrt.cwiseProduct(f.sin_inv);
  return f.inc.phi_w_plus * diag.asDiagonal() * f.inc.phi_minus.transpose() +
         f.inc.phi_w_minus * diag.asDiagonal() * f.inc.phi_plus.transpose();
}

Matrix generalized_degree_incidence(const MetricGraph& g, double lambda, double window) {
  require_admissible(g, lambda, window);
  const IncidenceFactors f = incidence_factors(g, lambda);
  const Vector diag = f.c_inv_sqrt.cwiseProduct(f.cot);
  return f.inc.phi_w_plus * diag.asDiagonal() * f.inc.phi_plus.transpose() +
         f.inc.phi_w_minus * diag.asDiagonal() * f.inc.phi_minus.transpose();
}

Matrix generalized_laplacian(const MetricGraph& g, double lambda, double window) {
  return generalized_degree(g, lambda, window) - generalized_adjacency(g, lambda, window);
}

double secular_determinant(const MetricGraph& g, double lambda, double window) {
  return generalized_laplacian(g, lambda, window).determinant();
}

// --- secular scan ------------------------------------------------------------

namespace {

void bisect_roots(const MetricGraph& g, double lo, double hi, std::size_t n_lo, std::size_t n_hi,
                  const SpectralTolerances& tol, std::vector<std::pair<double, std::size_t>>& out) {
  if (n_hi <= n_lo) return;
  const double width_floor = std::max(tol.root_abs, 4.0 * std::numeric_limits<double>::epsilon() * hi);
  if (hi - lo <= width_floor) {
    out.emplace_back(0.5 * (lo + hi), n_hi - n_lo);
    return;
  }
  const double mid = 0.5 * (lo + hi);
  std::size_t n_mid = count_negative(generalized_laplacian(g, mid, 0.0));
  n_mid = std::clamp(n_mid, n_lo, n_hi);
  bisect_roots(g, lo, mid, n_lo, n_mid, tol, out);
  bisect_roots(g, mid, hi, n_mid, n_hi, tol, out);
}

std::vector<SecularRoot> scan_interval(const MetricGraph& g, const Interval& iv,
                                       const SpectralTolerances& tol) {
  // N(0+) = 1: the constant direction is slightly negative for small lambda.
  const std::size_t n_lo = iv.from_zero ? 1 : count_negative(generalized_laplacian(g, iv.lo, 0.0));
  const std::size_t n_hi = count_negative(generalized_laplacian(g, iv.hi, 0.0));
  std::vector<std::pair<double, std::size_t>> raw;
  bisect_roots(g, iv.lo, iv.hi, n_lo, n_hi, tol, raw);

  std::vector<SecularRoot> roots;
  for (const auto& [lambda, jump] : raw) {
    const Matrix l = generalized_laplacian(g, lambda, 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(l);
    const Vector& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    std::vector<Index> order(static_cast<std::size_t>(ev.size()));
    for (Index i = 0; i < ev.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](Index x, Index y) { return std::abs(ev[x]) < std::abs(ev[y]); });
    std::size_t small = 0;
    for (Index i = 0; i < ev.size(); ++i) small += std::abs(ev[i]) < tol.kernel_rel * scale ? 1 : 0;
    if (small < jump) {
      throw Error(ErrorCode::ScanResolutionTooCoarse,
                  std::to_string(jump) + " eigenvalue crossings near lambda = " +
                      std::to_string(lambda) + " but kernel dimension " + std::to_string(small));
    }
    SecularRoot r;
    r.lambda = lambda;
    r.kernel_dim = jump;
    r.kernel.resize(l.rows(), static_cast<Index>(jump));
    for (std::size_t k = 0; k < jump; ++k) r.kernel.col(static_cast<Index>(k)) = es.eigenvectors().col(order[k]);
    roots.push_back(std::move(r));
  }
  return roots;
}

std::vector<Interval> scan_intervals(const MetricGraph& g, double lambda_max, double window) {
  struct Window {
    double lo, hi;
  };
  std::vector<Window> windows;
  for (const auto& e : g.edges()) {
    for (long l = 1;; ++l) {
      const double centre = static_cast<double>(l) * kPi;
      const double lo = e.c * std::pow(centre - window, 2);
      if (lo > lambda_max) break;
      windows.push_back({lo, e.c * std::pow(centre + window, 2)});
    }
  }
  std::sort(windows.begin(), windows.end(), [](const Window& x, const Window& y) { return x.lo < y.lo; });
  std::vector<Window> merged;
  for (const auto& w : windows) {
    if (!merged.empty() && w.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, w.hi);
    } else {
      merged.push_back(w);
    }
  }
  std::vector<Interval> out;
  double left = 0.0;
  bool from_zero = true;
  for (const auto& w : merged) {
    if (w.lo > left) out.push_back({from_zero ? std::min(w.lo, lambda_max) * 1e-12 : left,
                                    std::min(w.lo, lambda_max), from_zero});
    left = w.hi;
    from_zero = false;
    if (left >= lambda_max) return out;
  }
  if (left < lambda_max) {
    out.push_back({from_zero ? lambda_max * 1e-12 : left, lambda_max, from_zero});
  }
  return out;
}

}  // namespace

std::vector<SecularRoot> scan_sigma_L(const MetricGraph& g, double lambda_max,
                                      const ScanOptions& options) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be positive");
  const auto intervals = scan_intervals(g, lambda_max, options.tol.singular_window);
  std::vector<std::vector<SecularRoot>> found(intervals.size());
  std::vector<std::exception_ptr> errors(intervals.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t k = first; k < intervals.size(); k += stride) {
      try {
        found[k] = scan_interval(g, intervals[k], options.tol);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min<std::size_t>(options.jobs, intervals.size()));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
    for (auto& th : pool) th.join();
  }
  std::vector<SecularRoot> roots;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    if (errors[k]) std::rethrow_exception(errors[k]);
    for (auto& r : found[k]) roots.push_back(std::move(r));
  }
  return roots;
}

// --- eigenfunctions -------------------------------------------------------------

EigenFunction eigenfunction_from_kernel(const MetricGraph& g, double lambda, const Vector& d,
                                        const SpectralTolerances& tol) {
  const auto m = idx(g.edge_count());
  EigenFunction f;
  f.lambda = lambda;
  f.a.resize(m);
  f.b.resize(m);
  f.vertex_values = d;
  const double dn = d.norm();
  if (lambda == 0.0) {
    const IncidenceSet inc = incidence(g);
    const Matrix weighted = (inc.phi_w_plus - inc.phi_w_minus) * inc.phi.transpose();
    if ((weighted * d).norm() > tol.kernel_residual * weighted.norm() * dn) {
      throw Error(ErrorCode::KernelMismatch, "vertex vector is not constant on a connected graph");
    }
    for (Index j = 0; j < m; ++j) {
      const Edge& e = g.edge(static_cast<std::size_t>(j));
      f.a[j] = d[idx(e.tail)];
      f.b[j] = d[idx(e.head)] - d[idx(e.tail)];
    }
    return f;
  }
  const Matrix l = generalized_laplacian(g, lambda, tol.singular_window);
  const double residual = (l * d).norm();
  if (residual > tol.kernel_residual * l.norm() * dn) {
    throw Error(ErrorCode::KernelMismatch, "||L_C(lambda) d|| = " + std::to_string(residual) +
                                               " at lambda = " + std::to_string(lambda));
  }
  for (Index j = 0; j < m; ++j) {
    const Edge& e = g.edge(static_cast<std::size_t>(j));
    const double t = theta(e, lambda);
    f.a[j] = d[idx(e.tail)];
    f.b[j] = (d[idx(e.head)] - std::cos(t) * d[idx(e.tail)]) / std::sin(t);
  }
  return f;
}

std::optional<EigenPair> sigma_C_at(const MetricGraph& g, double lambda,
                                    const SpectralTolerances& tol) {
  const auto n = idx(g.vertex_count());
  const auto m = idx(g.edge_count());
  // unknowns z = (d, b); rows: one per edge, then Kirchhoff per vertex
  Matrix sys = Matrix::Zero(m + n, n + m);
  for (Index j = 0; j < m; ++j) {
    const Edge& e = g.edge(static_cast<std::size_t>(j));
    const double t = theta(e, lambda);
    const auto [dist, l] = pole_distance(t);
    double s, c;
    if (dist < tol.singular_window) {
      s = 0.0;
      c = (l % 2 == 0) ? 1.0 : -1.0;
    } else {
      s = std::sin(t);
      c = std::cos(t);
    }
    // continuity at the head: c d_tail + s b_j = d_head
    sys(j, idx(e.head)) += 1.0;
    sys(j, idx(e.tail)) -= c;
    sys(j, n + j) -= s;
    // Kirchhoff, with f'(0) = theta b and f'(1) = theta (-s d_tail + c b):
    // flux w_j = mu_j c_j theta_j enters the tail row with f'(0) and the
    // head row with -f'(1).
    const double w = e.mu * e.c * t;
    sys(m + idx(e.tail), n + j) += w;
    sys(m + idx(e.head), idx(e.tail)) += w * s;
    sys(m + idx(e.head), n + j) -= w * c;
  }
  Eigen::JacobiSVD<Matrix> svd(sys, Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double cut = tol.kernel_rel * sv[0];
  std::vector<EigenFunction> fs;
  for (Index k = 0; k < sv.size(); ++k) {
    if (sv[k] >= cut) continue;
    const Vector z = svd.matrixV().col(k);
    EigenFunction f;
    f.lambda = lambda;
    f.vertex_values = z.head(n);
    f.a.resize(m);
    for (Index j = 0; j < m; ++j) f.a[j] = z[idx(g.edge(static_cast<std::size_t>(j)).tail)];
    f.b = z.tail(m);
    fs.push_back(std::move(f));
  }
  fs = orthonormalize(g, std::move(fs));
  if (fs.empty()) return std::nullopt;
  EigenPair p;
  p.lambda = lambda;
  p.multiplicity = fs.size();
  p.eigen_class = EigenClass::SigmaC;
  p.eigenfunctions = std::move(fs);
  return p;
}

std::optional<EigenPair> sigma_C_check(const MetricGraph& g, std::size_t edge, int k,
                                       const SpectralTolerances& tol) {
  if (k == 0) throw std::invalid_argument("sigma_C_check needs k != 0");
  const double lambda = g.edge(edge).c * std::pow(static_cast<double>(k) * kPi, 2);
  return sigma_C_at(g, lambda, tol);
}

// --- assembled spectra ------------------------------------------------------------

SpectrumReport unit_speed_spectrum(const MetricGraph& g, double lambda_max,
                                   const SpectralTolerances& tol) {
  if (!g.unit_speed()) throw Error(ErrorCode::NotUnitSpeed, "closed form needs c_j == 1 on every edge");
  const auto n = idx(g.vertex_count());
  const auto m = idx(g.edge_count());

  // mu-weighted transition matrix D_mu^{-1} A_mu through its symmetric form
  Matrix a_mu = Matrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    a_mu(idx(e.tail), idx(e.head)) += e.mu;
    a_mu(idx(e.head), idx(e.tail)) += e.mu;
  }
  const Vector deg = a_mu.rowwise().sum();
  const Vector inv_sqrt = deg.cwiseSqrt().cwiseInverse();
  Eigen::SelfAdjointEigenSolver<Matrix> es(inv_sqrt.asDiagonal() * a_mu * inv_sqrt.asDiagonal());
  const Vector& alpha = es.eigenvalues();

  std::vector<EigenPair> pairs{zero_pair(g)};
  constexpr double kAlphaTol = 1e-9;
  for (Index s = 0; s < n;) {
    Index e = s + 1;
    while (e < n && alpha[e] - alpha[e - 1] < kAlphaTol) ++e;
    const double av = alpha.segment(s, e - s).mean();
    if (std::abs(av) < 1.0 - kAlphaTol) {
      const double th = std::acos(av);
      const Matrix d = inv_sqrt.asDiagonal() * es.eigenvectors().middleCols(s, e - s);
      std::vector<double> lambdas{th * th};
      for (long l = 1;; ++l) {
        const double base = 2.0 * kPi * static_cast<double>(l);
        if ((base - th) * (base - th) > lambda_max) break;
        lambdas.push_back((base - th) * (base - th));
        lambdas.push_back((base + th) * (base + th));
      }
      for (double lambda : lambdas) {
        if (lambda > lambda_max) continue;
        std::vector<EigenFunction> fs;
        for (Index k = 0; k < d.cols(); ++k) fs.push_back(eigenfunction_from_kernel(g, lambda, d.col(k), tol));
        fs = orthonormalize(g, std::move(fs));
        pairs.push_back({lambda, fs.size(), EigenClass::SigmaL, std::move(fs)});
      }
    }
    s = e;
  }

  const bool bip = bipartition(g).has_value();
  for (long k = 1;; ++k) {
    const double lambda = std::pow(static_cast<double>(k) * kPi, 2);
    if (lambda > lambda_max) break;
    const long expected = (bip || k % 2 == 0) ? m - n + 2 : m - n;
    auto pair = sigma_C_at(g, lambda, tol);
    const long got = pair ? static_cast<long>(pair->multiplicity) : 0;
    if (got != expected) {
      throw Error(ErrorCode::KernelMismatch, "eigenspace at k^2 pi^2, k = " + std::to_string(k) +
                                                 ", has dimension " + std::to_string(got) +
                                                 ", expected " + std::to_string(expected));
    }
    if (pair) pairs.push_back(std::move(*pair));
  }

  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& x, const EigenPair& y) { return x.lambda < y.lambda; });
  SpectrumReport r;
  r.lambda_max = lambda_max;
  r.method = SpectrumMethod::UnitSpeedClosedForm;
  r.pairs = std::move(pairs);
  return r;
}

SpectrumReport secular_spectrum(const MetricGraph& g, double lambda_max, const ScanOptions& options) {
  std::vector<EigenPair> pairs{zero_pair(g)};
  for (const auto& root : scan_sigma_L(g, lambda_max, options)) {
    std::vector<EigenFunction> fs;
    for (Index k = 0; k < root.kernel.cols(); ++k) {
      fs.push_back(eigenfunction_from_kernel(g, root.lambda, root.kernel.col(k), options.tol));
    }
    fs = orthonormalize(g, std::move(fs));
    pairs.push_back({root.lambda, fs.size(), EigenClass::SigmaL, std::move(fs)});
  }
  for (double lambda : singular_points(g, lambda_max)) {
    if (auto p = sigma_C_at(g, lambda, options.tol)) pairs.push_back(std::move(*p));
  }
  SpectrumReport r;
  r.lambda_max = lambda_max;
  r.method = SpectrumMethod::SecularScan;
  r.pairs = merge_pairs(g, std::move(pairs), options.tol.merge_rel);
  return r;
}

SpectrumReport spectrum(const MetricGraph& g, double lambda_max, const ScanOptions& options) {
  if (g.unit_speed()) return unit_speed_spectrum(g, lambda_max, options.tol);
  return secular_spectrum(g, lambda_max, options);
}

DomainDefect domain_defect(const MetricGraph& g, const EigenFunction& f, std::size_t grid_points) {
  DomainDefect dd;
  const std::size_t n = g.vertex_count();
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  Vector flux = Vector::Zero(idx(n));
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const Edge& e = g.edge(j);
    const double v0 = f.value(g, j, 0.0), v1 = f.value(g, j, 1.0);
    lo[e.tail] = std::min(lo[e.tail], v0);
    hi[e.tail] = std::max(hi[e.tail], v0);
    lo[e.head] = std::min(lo[e.head], v1);
    hi[e.head] = std::max(hi[e.head], v1);
    flux[idx(e.tail)] += e.mu * e.c * f.derivative(g, j, 0.0);
    flux[idx(e.head)] -= e.mu * e.c * f.derivative(g, j, 1.0);
    for (std::size_t k = 0; k < grid_points; ++k) {
      const double x = static_cast<double>(k) / static_cast<double>(grid_points - 1);
      dd.residual = std::max(dd.residual, std::abs(e.c * f.second_derivative(g, j, x) + f.lambda * f.value(g, j, x)));
    }
  }
  for (std::size_t i = 0; i < n; ++i) dd.continuity = std::max(dd.continuity, hi[i] - lo[i]);
  dd.kirchhoff = flux.cwiseAbs().maxCoeff();
  return dd;
}

}  // namespace qgraph
