#include "morse/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace morse::lab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two overlapping angular charts covering the circle. Every angle lies at
// least 0.4 inside one of them.
struct AngularChart {
  const char* id;
  double lower;
  double upper;
};
constexpr AngularChart kAngularCharts[] = {{"a", -2.0, 2.0}, {"b", 1.2, 5.1}};

std::vector<double> identity_canonical(std::span<const double> x) {
  return {x.begin(), x.end()};
}

ChartFunction circle_cos(int n) {
  ChartFunction fn;
  fn.name = "circle_cos:" + std::to_string(n);
  fn.dim = 1;
  fn.periodicities = {kTwoPi};
  fn.declared_counts = IndexCountVector{1, {n, n}};
  const double freq = n;
  for (const auto& ac : kAngularCharts) {
    fn.charts.push_back(Chart{std::string("theta_") + ac.id,
                              {ac.lower},
                              {ac.upper},
                              [freq](std::span<const double> x) { return std::cos(freq * x[0]); },
                              identity_canonical});
  }
  return fn;
}

ChartFunction sphere_height() {
  ChartFunction fn;
  fn.name = "sphere_height";
  fn.dim = 2;
  fn.periodicities = {std::nullopt, std::nullopt, std::nullopt};
  fn.declared_counts = IndexCountVector{2, {1, 0, 1}};
  // Stereographic chart from the north pole, centred at the minimum.
  fn.charts.push_back(Chart{"south",
                            {-1.5, -1.5},
                            {1.5, 1.5},
                            [](std::span<const double> u) {
                              const double r2 = u[0] * u[0] + u[1] * u[1];
                              return (r2 - 1.0) / (r2 + 1.0);
                            },
                            [](std::span<const double> u) {
                              const double r2 = u[0] * u[0] + u[1] * u[1];
                              return std::vector<double>{2.0 * u[0] / (r2 + 1.0),
                                                         2.0 * u[1] / (r2 + 1.0),
                                                         (r2 - 1.0) / (r2 + 1.0)};
                            }});
  // From the south pole, centred at the maximum.
  fn.charts.push_back(Chart{"north",
                            {-1.5, -1.5},
                            {1.5, 1.5},
                            [](std::span<const double> u) {
                              const double r2 = u[0] * u[0] + u[1] * u[1];
                              return (1.0 - r2) / (1.0 + r2);
                            },
                            [](std::span<const double> u) {
                              const double r2 = u[0] * u[0] + u[1] * u[1];
                              return std::vector<double>{2.0 * u[0] / (1.0 + r2),
                                                         2.0 * u[1] / (1.0 + r2),
                                                         (1.0 - r2) / (1.0 + r2)};
                            }});
  return fn;
}

ChartFunction torus_height() {
  constexpr double R = 2.0;
  constexpr double r = 1.0;
  ChartFunction fn;
  fn.name = "torus_height";
  fn.dim = 2;
  fn.periodicities = {kTwoPi, kTwoPi};
  fn.declared_counts = IndexCountVector{2, {1, 2, 1}};
  for (const auto& cu : kAngularCharts)
    for (const auto& cv : kAngularCharts)
      fn.charts.push_back(Chart{std::string("u") + cu.id + "_v" + cv.id,
                                {cu.lower, cv.lower},
                                {cu.upper, cv.upper},
                                [](std::span<const double> x) {
                                  return (R + r * std::cos(x[0])) * std::sin(x[1]);
                                },
                                identity_canonical});
  return fn;
}

IndexCountVector convolve_counts(const IndexCountVector& a, const IndexCountVector& b) {
  IndexCountVector out = IndexCountVector::zeros(a.dimension + b.dimension);
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    for (std::size_t k = 0; k < b.counts.size(); ++k) out.counts[i + k] += a.counts[i] * b.counts[k];
  return out;
}

void require_margin(const Chart& chart, std::span<const double> x, double needed, const char* op) {
  if (x.size() != chart.dim())
    throw PreconditionError(std::string(op) + ": point dimension does not match chart " + chart.id);
  if (chart.margin(x) < needed) {
    std::ostringstream msg;
    msg << op << ": point is within " << needed << " of the boundary of chart " << chart.id;
    throw PreconditionError(msg.str());
  }
}

const Chart& chart_at(const ChartFunction& fn, std::size_t chart) {
  if (chart >= fn.charts.size())
    throw PreconditionError("chart index " + std::to_string(chart) + " out of range for " +
                            fn.name);
  return fn.charts[chart];
}

// Unchecked central-difference kernels; `work` is a scratch copy of x.
void gradient_into(const Chart& c, std::vector<double>& work, double h, Eigen::VectorXd& g) {
  const std::size_t n = work.size();
  g.resize(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = work[i];
    work[i] = xi + h;
    const double fp = c.evaluate(work);
    work[i] = xi - h;
    const double fm = c.evaluate(work);
    work[i] = xi;
    g[static_cast<Eigen::Index>(i)] = (fp - fm) / (2.0 * h);
  }
}

void hessian_into(const Chart& c, std::vector<double>& work, double h, Eigen::MatrixXd& H) {
  const std::size_t n = work.size();
  const auto N = static_cast<Eigen::Index>(n);
  H.resize(N, N);
  const double f0 = c.evaluate(work);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = work[i];
    work[i] = xi + h;
    const double fp = c.evaluate(work);
    work[i] = xi - h;
    const double fm = c.evaluate(work);
    work[i] = xi;
    H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double xi = work[i];
      const double xj = work[j];
      auto at = [&](double si, double sj) {
        work[i] = xi + si * h;
        work[j] = xj + sj * h;
        return c.evaluate(work);
      };
      const double v = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      work[i] = xi;
      work[j] = xj;
      H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      H(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  H = 0.5 * (H + H.transpose()).eval();
}

// Newton iteration on the FD gradient from `seed`; returns the converged
// point or nothing when the iterate stalls or leaves the chart.
std::optional<std::vector<double>> newton(const Chart& c, std::vector<double> x,
                                          const Tolerances& tol, double max_step) {
  const double needed = std::max(tol.h_grad, 2.0 * tol.h_hess);
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  for (int it = 0; it <= tol.max_iter; ++it) {
    if (c.margin(x) < needed) return std::nullopt;
    gradient_into(c, x, tol.h_grad, g);
    if (!g.allFinite()) return std::nullopt;
    if (g.norm() < tol.tol_grad) return x;
    if (it == tol.max_iter) break;
    hessian_into(c, x, tol.h_hess, H);
    Eigen::VectorXd dx = H.fullPivLu().solve(-g);
    if (!dx.allFinite()) return std::nullopt;
    const double len = dx.norm();
    if (len > max_step) dx *= max_step / len;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[static_cast<Eigen::Index>(i)];
  }
  return std::nullopt;
}

}  // namespace

double Chart::margin(std::span<const double> x) const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lower.size(); ++i)
    m = std::min({m, x[i] - lower[i], upper[i] - x[i]});
  return m;
}

double ChartFunction::canonical_distance(std::span<const double> a,
                                         std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < periodicities.size(); ++i) {
    double d = a[i] - b[i];
    if (periodicities[i]) {
      const double p = *periodicities[i];
      d = std::remainder(d, p);
    }
    s += d * d;
  }
  return std::sqrt(s);
}

ChartFunction catalog(const std::string& name, const std::vector<int>& params) {
  if (name == "circle_cos") {
    if (params.size() != 1 || params[0] < 1)
      throw PreconditionError("circle_cos takes one integer parameter n >= 1");
    return circle_cos(params[0]);
  }
  if (name == "sphere_height" || name == "torus_height") {
    if (!params.empty()) throw PreconditionError(name + " takes no parameters");
    return name == "sphere_height" ? sphere_height() : torus_height();
  }
  throw PreconditionError("unknown catalog function '" + name +
                          "' (expected circle_cos, sphere_height or torus_height)");
}

ChartFunction catalog_from_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<int> params;
  if (colon != std::string::npos) {
    std::istringstream in(spec.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size())
        throw PreconditionError("catalog parameter '" + item + "' is not an integer");
      params.push_back(v);
    }
  }
  return catalog(name, params);
}

Eigen::VectorXd gradient_fd(const ChartFunction& fn, std::size_t chart, std::span<const double> x,
                            double h_grad) {
  const Chart& c = chart_at(fn, chart);
  require_margin(c, x, h_grad, "gradient_fd");
  std::vector<double> work(x.begin(), x.end());
  Eigen::VectorXd g;
  gradient_into(c, work, h_grad, g);
  return g;
}

Eigen::MatrixXd hessian_fd(const ChartFunction& fn, std::size_t chart, std::span<const double> x,
                           double h_hess) {
  const Chart& c = chart_at(fn, chart);
  require_margin(c, x, 2.0 * h_hess, "hessian_fd");
  std::vector<double> work(x.begin(), x.end());
  Eigen::MatrixXd H;
  hessian_into(c, work, h_hess, H);
  return H;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end());
  return out;
}

IndexCountVector histogram(const std::vector<CriticalPoint>& points, int dim) {
  IndexCountVector h = IndexCountVector::zeros(dim);
  for (const auto& p : points) h.counts.at(static_cast<std::size_t>(p.index)) += 1;
  return h;
}

std::vector<CriticalPoint> find_critical_points(const ChartFunction& fn, const Tolerances& tol) {
  if (tol.n_seed < 1) throw PreconditionError("find_critical_points: n_seed must be positive");

  struct Candidate {
    std::size_t chart;
    std::vector<double> x;
    std::vector<double> canonical;
    double margin;
  };
  std::vector<Candidate> survivors;
  std::size_t converged = 0;

  for (std::size_t ci = 0; ci < fn.charts.size(); ++ci) {
    const Chart& c = fn.charts[ci];
    const std::size_t n = c.dim();
    double min_width = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) min_width = std::min(min_width, c.upper[a] - c.lower[a]);
    const double max_step = 0.25 * min_width;

    std::vector<int> idx(n, 0);
    std::vector<double> seed(n);
    for (bool more = true; more;) {
      for (std::size_t a = 0; a < n; ++a)
        seed[a] = c.lower[a] + (idx[a] + 0.5) * (c.upper[a] - c.lower[a]) / tol.n_seed;
      if (auto x = newton(c, seed, tol, max_step)) {
        ++converged;
        Candidate cand{ci, *x, c.canonical(*x), c.margin(*x)};
        auto dup = std::find_if(survivors.begin(), survivors.end(), [&](const Candidate& s) {
          return fn.canonical_distance(s.canonical, cand.canonical) < tol.tol_dedupe;
        });
        if (dup == survivors.end())
          survivors.push_back(std::move(cand));
        else if (cand.margin > dup->margin)
          *dup = std::move(cand);
      }
      more = false;
      for (std::size_t a = 0; a < n; ++a) {
        if (++idx[a] < tol.n_seed) {
          more = true;
          break;
        }
        idx[a] = 0;
      }
    }
  }

  if (converged == 0)
    throw SearchFailure(SearchFailure::Kind::NoConvergence,
                        fn.name + ": no Newton seed converged in any chart");

  std::vector<CriticalPoint> points;
  for (auto& s : survivors) {
    const Chart& c = fn.charts[s.chart];
    CriticalPoint p;
    p.chart = s.chart;
    p.chart_id = c.id;
    p.coordinates = s.x;
    p.canonical = s.canonical;
    p.value = c.evaluate(s.x);
    p.gradient_norm = gradient_fd(fn, s.chart, s.x, tol.h_grad).norm();
    p.hessian = hessian_fd(fn, s.chart, s.x, tol.h_hess);
    p.hessian_eigenvalues = symmetric_eigenvalues(p.hessian);
    p.chart_margin = s.margin;
    double largest = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (double ev : p.hessian_eigenvalues) {
      largest = std::max(largest, std::abs(ev));
      smallest = std::min(smallest, std::abs(ev));
      if (ev < 0) ++p.index;
    }
    if (!(smallest > tol.tol_degenerate * std::max(1.0, largest))) {
      std::ostringstream msg;
      msg << fn.name << ": degenerate Hessian at chart " << c.id << " (min |eigenvalue| "
          << smallest << ")";
      throw SearchFailure(SearchFailure::Kind::Degenerate, msg.str());
    }
    points.push_back(std::move(p));
  }

  // Deterministic order: by value, then canonical coordinates.
  std::sort(points.begin(), points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.canonical < b.canonical;
  });

  if (fn.declared_counts) {
    const IndexCountVector found = histogram(points, fn.dim);
    if (!(found == *fn.declared_counts)) {
      std::ostringstream msg;
      msg << fn.name << ": index histogram (";
      for (std::size_t j = 0; j < found.counts.size(); ++j) msg << (j ? "," : "") << found.counts[j];
      msg << ") differs from declared (";
      for (std::size_t j = 0; j < fn.declared_counts->counts.size(); ++j)
        msg << (j ? "," : "") << fn.declared_counts->counts[j];
      msg << ")";
      throw SearchFailure(SearchFailure::Kind::HistogramMismatch, msg.str());
    }
  }
  return points;
}

ChartFunction product_function(const ChartFunction& f1, const ChartFunction& f2, double a,
                               double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw PreconditionError("product_function: projection weights must be positive");
  if (f1.dim + f2.dim > kMaxLabDimension)
    throw PreconditionError("product_function: product dimension " +
                            std::to_string(f1.dim + f2.dim) + " exceeds the cap of " +
                            std::to_string(kMaxLabDimension));
  ChartFunction fn;
  fn.name = "diag(" + f1.name + "," + f2.name + ")";
  fn.dim = f1.dim + f2.dim;
  fn.periodicities = f1.periodicities;
  fn.periodicities.insert(fn.periodicities.end(), f2.periodicities.begin(), f2.periodicities.end());
  if (f1.declared_counts && f2.declared_counts)
    fn.declared_counts = convolve_counts(*f1.declared_counts, *f2.declared_counts);

  const auto split = static_cast<std::size_t>(f1.dim);
  for (const Chart& c1 : f1.charts)
    for (const Chart& c2 : f2.charts) {
      Chart c;
      c.id = c1.id + "|" + c2.id;
      c.lower = c1.lower;
      c.lower.insert(c.lower.end(), c2.lower.begin(), c2.lower.end());
      c.upper = c1.upper;
      c.upper.insert(c.upper.end(), c2.upper.begin(), c2.upper.end());
      c.evaluate = [e1 = c1.evaluate, e2 = c2.evaluate, a, b, split](std::span<const double> x) {
        return a * e1(x.first(split)) + b * e2(x.subspan(split));
      };
      c.canonical = [m1 = c1.canonical, m2 = c2.canonical, split](std::span<const double> x) {
        std::vector<double> out = m1(x.first(split));
        std::vector<double> tail = m2(x.subspan(split));
        out.insert(out.end(), tail.begin(), tail.end());
        return out;
      };
      fn.charts.push_back(std::move(c));
    }
  return fn;
}

Lemma1Report verify_lemma1(const ChartFunction& f1, const ChartFunction& f2, double a, double b,
                           const Tolerances& tol) {
  Lemma1Report report;
  report.f1_name = f1.name;
  report.f2_name = f2.name;
  report.weight_first = a;
  report.weight_second = b;

  const ChartFunction product = product_function(f1, f2, a, b);
  try {
    report.first_points = find_critical_points(f1, tol);
    report.second_points = find_critical_points(f2, tol);
    report.product_points = find_critical_points(product, tol);
  } catch (const SearchFailure& e) {
    report.failures.push_back(e.what());
    return report;
  }
  const auto& P1 = report.first_points;
  const auto& P2 = report.second_points;
  const auto& P = report.product_points;

  report.first_histogram = histogram(P1, f1.dim);
  report.second_histogram = histogram(P2, f2.dim);
  report.product_histogram = histogram(P, product.dim);
  report.convolution_histogram =
      convolve_counts(*report.first_histogram, *report.second_histogram);

  // Pairing: each product point against every (p1, p2).
  std::vector<int> used(P1.size() * P2.size(), 0);
  report.indices_additive = true;
  for (std::size_t k = 0; k < P.size(); ++k) {
    std::optional<PairMatch> hit;
    int hits = 0;
    for (std::size_t i = 0; i < P1.size(); ++i)
      for (std::size_t j = 0; j < P2.size(); ++j) {
        std::vector<double> joined = P1[i].canonical;
        joined.insert(joined.end(), P2[j].canonical.begin(), P2[j].canonical.end());
        const double d = product.canonical_distance(P[k].canonical, joined);
        if (d < tol.tol_match) {
          ++hits;
          hit = PairMatch{k, i, j, d, P[k].index, P1[i].index, P2[j].index, false, 0.0};
        }
      }
    if (hits != 1) {
      report.unmatched_product_points.push_back(k);
      continue;
    }
    hit->index_additive = hit->index == hit->first_index + hit->second_index;
    if (!hit->index_additive) report.indices_additive = false;

    const auto& ev = P[k].hessian_eigenvalues;
    const double largest = std::max({1.0, std::abs(ev.front()), std::abs(ev.back())});
    const auto d1 = static_cast<Eigen::Index>(f1.dim);
    const auto d2 = static_cast<Eigen::Index>(f2.dim);
    hit->off_block_relative = P[k].hessian.block(0, d1, d1, d2).cwiseAbs().maxCoeff() / largest;
    used[hit->first_point * P2.size() + hit->second_point] += 1;
    report.matches.push_back(*hit);
  }
  for (std::size_t i = 0; i < P1.size(); ++i)
    for (std::size_t j = 0; j < P2.size(); ++j)
      if (used[i * P2.size() + j] != 1) report.unused_pairs.emplace_back(i, j);

  report.bijective = report.unmatched_product_points.empty() && report.unused_pairs.empty();
  report.count_identity = P.size() == P1.size() * P2.size();
  report.histogram_identity = *report.product_histogram == *report.convolution_histogram;

  report.gradients_small = true;
  for (const auto* list : {&P1, &P2, &P})
    for (const auto& p : *list)
      if (!(p.gradient_norm < tol.tol_grad)) report.gradients_small = false;

  report.block_structure = true;
  for (const auto& m : report.matches)
    if (!(m.off_block_relative < tol.tol_block)) report.block_structure = false;

  report.fd_consistent = true;
  for (std::size_t k = 0; k < P.size(); ++k) {
    ConvergenceCheck cc;
    cc.product_point = k;
    const auto coarse = symmetric_eigenvalues(
        hessian_fd(product, P[k].chart, P[k].coordinates, 2.0 * tol.h_hess));
    const auto fine = symmetric_eigenvalues(
        hessian_fd(product, P[k].chart, P[k].coordinates, 0.5 * tol.h_hess));
    for (std::size_t i = 0; i < fine.size(); ++i) {
      cc.coarse_change = std::max(cc.coarse_change, std::abs(coarse[i] - P[k].hessian_eigenvalues[i]));
      cc.fine_change = std::max(cc.fine_change, std::abs(P[k].hessian_eigenvalues[i] - fine[i]));
    }
    const double half = 0.5 * tol.h_hess;
    cc.noise_floor = 64.0 * std::numeric_limits<double>::epsilon() *
                     std::max(1.0, std::abs(P[k].value)) / (half * half);
    cc.passed = cc.fine_change < 4.0 * cc.coarse_change + cc.noise_floor;
    if (!cc.passed) report.fd_consistent = false;
    report.convergence.push_back(cc);
  }

  if (!report.bijective)
    report.failures.push_back(std::to_string(report.unmatched_product_points.size()) +
                              " product critical points unmatched, " +
                              std::to_string(report.unused_pairs.size()) + " factor pairs unused");
  if (!report.indices_additive) report.failures.push_back("index additivity fails at a match");
  if (!report.count_identity)
    report.failures.push_back("|crit(f)| = " + std::to_string(P.size()) + " but |crit(f1)|*|crit(f2)| = " +
                              std::to_string(P1.size() * P2.size()));
  if (!report.histogram_identity)
    report.failures.push_back("product histogram differs from the convolution of factor histograms");
  if (!report.gradients_small) report.failures.push_back("a gradient norm exceeds tol_grad");
  if (!report.block_structure)
    report.failures.push_back("off-diagonal Hessian block exceeds the relative tolerance");
  if (!report.fd_consistent)
    report.failures.push_back("Hessian eigenvalues fail the step-halving convergence check");
  return report;
}

}  // namespace morse::lab
