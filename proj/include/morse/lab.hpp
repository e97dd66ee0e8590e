#ifndef MORSE_LAB_HPP
#define MORSE_LAB_HPP

// Numerical check of index additivity for diagonal Morse functions on
// explicit chart-described manifolds.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "morse/algebra.hpp"

namespace morse::lab {

/// Step sizes and thresholds, all in chart-coordinate units.
struct Tolerances {
  double h_grad = 1e-5;
  double h_hess = 1e-4;
  double tol_grad = 1e-8;
  double tol_degenerate = 1e-5;
  double tol_dedupe = 1e-4;
  double tol_match = 1e-6;
  int n_seed = 32;
  int max_iter = 50;
  /// Off-diagonal Hessian blocks must stay below this, relative to
  /// max(1, largest |eigenvalue|).
  double tol_block = 1e-6;
};

using ChartEval = std::function<double(std::span<const double>)>;
/// Local coordinates -> canonical coordinates shared by all charts.
using CanonicalMap = std::function<std::vector<double>(std::span<const double>)>;

struct Chart {
  std::string id;
  std::vector<double> lower;  // open box domain, per axis
  std::vector<double> upper;
  ChartEval evaluate;
  CanonicalMap canonical;

  std::size_t dim() const { return lower.size(); }
  /// Distance from x to the nearest face of the box (negative outside).
  double margin(std::span<const double> x) const;
};

struct ChartFunction {
  std::string name;
  int dim = 0;
  std::vector<Chart> charts;
  /// Period of each canonical axis, when that axis is angular.
  std::vector<std::optional<double>> periodicities;
  std::optional<IndexCountVector> declared_counts;

  std::size_t canonical_dim() const { return periodicities.size(); }
  /// Euclidean distance in canonical coordinates, periodic axes wrapped.
  double canonical_distance(std::span<const double> a, std::span<const double> b) const;
};

struct CriticalPoint {
  std::string chart_id;
  std::size_t chart = 0;
  std::vector<double> coordinates;
  std::vector<double> canonical;
  double value = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> hessian_eigenvalues;  // ascending
  Eigen::MatrixXd hessian;
  int index = 0;
  double chart_margin = 0.0;
};

/// Distinct failure modes of the critical-point search.
class SearchFailure : public std::runtime_error {
 public:
  enum class Kind { NoConvergence, Degenerate, HistogramMismatch };
  SearchFailure(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// circle_cos (param n >= 1), sphere_height, torus_height.
ChartFunction catalog(const std::string& name, const std::vector<int>& params = {});
/// "circle_cos:3", "sphere_height", "torus_height".
ChartFunction catalog_from_spec(const std::string& spec);

Eigen::VectorXd gradient_fd(const ChartFunction& fn, std::size_t chart, std::span<const double> x,
                            double h_grad = Tolerances{}.h_grad);

/// Central second differences, symmetrized.
Eigen::MatrixXd hessian_fd(const ChartFunction& fn, std::size_t chart, std::span<const double> x,
                           double h_hess = Tolerances{}.h_hess);

/// Ascending eigenvalues of a symmetric matrix.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& h);

/// Grid-seeded Newton search in every chart, deduplicated across seeds and
/// charts, each survivor classified by its Hessian. Throws SearchFailure.
std::vector<CriticalPoint> find_critical_points(const ChartFunction& fn,
                                                const Tolerances& tol = {});

/// Index histogram of a list of critical points of a dim-dimensional function.
IndexCountVector histogram(const std::vector<CriticalPoint>& points, int dim);

/// (x1, x2) -> a f1(x1) + b f2(x2) on pairwise products of charts.
ChartFunction product_function(const ChartFunction& f1, const ChartFunction& f2, double a,
                               double b);

inline constexpr int kMaxLabDimension = 4;

struct PairMatch {
  std::size_t product_point = 0;
  std::size_t first_point = 0;
  std::size_t second_point = 0;
  double distance = 0.0;
  int index = 0;
  int first_index = 0;
  int second_index = 0;
  bool index_additive = false;
  /// Largest |H_ij| between the two factor blocks, relative to
  /// max(1, largest |eigenvalue|).
  double off_block_relative = 0.0;
};

/// FD convergence sanity check at one product critical point:
/// the change from halving h_hess must stay below 4x the change from
/// doubling it, up to rounding noise.
struct ConvergenceCheck {
  std::size_t product_point = 0;
  double coarse_change = 0.0;  // max_i |lambda_i(2h) - lambda_i(h)|
  double fine_change = 0.0;    // max_i |lambda_i(h) - lambda_i(h/2)|
  double noise_floor = 0.0;
  bool passed = false;
};

struct Lemma1Report {
  std::string f1_name;
  std::string f2_name;
  double weight_first = 0.0;
  double weight_second = 0.0;
  std::vector<CriticalPoint> first_points;
  std::vector<CriticalPoint> second_points;
  std::vector<CriticalPoint> product_points;
  std::vector<PairMatch> matches;
  std::vector<ConvergenceCheck> convergence;
  std::vector<std::size_t> unmatched_product_points;
  std::vector<std::pair<std::size_t, std::size_t>> unused_pairs;
  std::optional<IndexCountVector> first_histogram;
  std::optional<IndexCountVector> second_histogram;
  std::optional<IndexCountVector> product_histogram;
  std::optional<IndexCountVector> convolution_histogram;

  bool bijective = false;
  bool indices_additive = false;
  bool count_identity = false;
  bool histogram_identity = false;
  bool gradients_small = false;
  bool block_structure = false;
  bool fd_consistent = false;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

Lemma1Report verify_lemma1(const ChartFunction& f1, const ChartFunction& f2, double a, double b,
                           const Tolerances& tol = {});

}  // namespace morse::lab

#endif  // MORSE_LAB_HPP
