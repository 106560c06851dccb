#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pbergman/geometry.hpp"
#include "pbergman/holo.hpp"

namespace pbergman {

/// Raised when the solver cannot produce a meaningful iterate (inconsistent
/// constraints, singular normal equations).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// row * coefficients == target, in raw monomial coefficients.
struct LinearConstraint {
  Eigen::RowVectorXcd row;
  complex target;
};

/// min ||f||_p over f = sum_n c_n z^n subject to the linear constraints.
struct ExtremalProblem {
  BasisSpec basis;
  std::shared_ptr<const QuadratureGrid> grid;
  double p;
  std::vector<LinearConstraint> constraints;
};

struct SolverConfig {
  /// Relative objective change ending an IRLS stage.
  double tolerance = 1e-13;
  /// Step length (scaled coordinates, relative to 1 + |y|) ending a stage.
  double step_tolerance = 1e-9;
  /// Relative change between the last two smoothing stages below which a
  /// non-differentiable (p <= 1) run is declared converged.
  double stage_tolerance = 1e-6;
  int max_iterations = 400;
  std::vector<double> smoothing_schedule{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  int restarts = 8;
  std::uint64_t rng_seed = 0;
  /// Standard deviation of multistart perturbations in normalized coordinates.
  double perturbation_scale = 0.25;

  void validate() const;
};

struct Solution {
  CoeffVector coeffs;
  /// The attained ||f||_p (unsmoothed).
  double objective = 0.0;
  double feasibility_residual = 0.0;
  /// Projected gradient norm of ||f||_p^p; NaN for p <= 1.
  double stationarity_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  /// Smoothed objective after every accepted step, across all stages.
  std::vector<double> history;
};

/// The smoothed objective sum_i w_i (|f(z_i)|^2 + eps)^(p/2) on the affine
/// feasible set, parameterized by y in C^d through c = c0 + N y (basis
/// elements pre-normalized to unit L^p norm).  Gradients are taken with
/// respect to the 2d real parameters (Re y, Im y).
class SmoothedObjective {
 public:
  explicit SmoothedObjective(const ExtremalProblem& problem);

  Eigen::Index dimension() const noexcept { return null_basis_.cols(); }
  double p() const noexcept { return p_; }

  /// Values f(z_i) for the iterate y.
  Eigen::VectorXcd values(const Eigen::VectorXcd& y) const;
  double value(const Eigen::VectorXcd& y, double eps) const;
  /// Unsmoothed sum_i w_i |f(z_i)|^p.
  double pth_power(const Eigen::VectorXcd& y) const;
  /// Real gradient, ordered (d/dRe y_1..d, d/dIm y_1..d).
  Eigen::VectorXd gradient(const Eigen::VectorXcd& y, double eps) const;

  /// The weighted least-squares (p = 2) iterate.
  Eigen::VectorXcd least_squares_start() const;
  /// Minimizer of sum_i u_i |f(z_i)|^2.
  Eigen::VectorXcd weighted_least_squares(const Eigen::VectorXd& u) const;

  CoeffVector coefficients(const Eigen::VectorXcd& y) const;
  Eigen::VectorXcd parameters(const CoeffVector& coeffs) const;

  double feasibility_residual(const CoeffVector& coeffs) const;
  /// Norm of the gradient of ||f||_p^p projected on the constraint null space.
  double projected_gradient_norm(const Eigen::VectorXcd& y) const;

  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<int> exponents_;
  std::vector<LinearConstraint> constraints_;
  double p_;
  std::vector<double> weights_;
  Eigen::VectorXd scale_;          // raw c_n = scale_n * normalized b_n
  Eigen::VectorXcd particular_;    // normalized coordinates
  Eigen::MatrixXcd null_basis_;    // orthonormal, normalized coordinates
  Eigen::MatrixXcd reduced_;       // design * diag(scale) * null_basis
  Eigen::VectorXcd offset_;        // design * diag(scale) * particular
};

/// Convex regime (p >= 1): IRLS with epsilon continuation from the
/// least-squares iterate.
Solution minimize_pnorm(const ExtremalProblem& problem, const SolverConfig& config);

/// IRLS with continuation from a given starting point; any p > 0.
Solution minimize_from(const ExtremalProblem& problem, const SolverConfig& config,
                       const Eigen::VectorXcd& start);

/// Restarts from the p = 1 solution and seeded perturbations of it.  Returns
/// every converged run sorted by objective (duplicates included).
std::vector<Solution> multistart_minimize(const ExtremalProblem& problem,
                                          const SolverConfig& config);

/// Drops solutions within `distance` (max-norm on coefficients) of a better one.
std::vector<Solution> distinct_solutions(const std::vector<Solution>& sorted,
                                         double distance = 1e-4);

/// Projected-gradient stationarity certificate; requires p > 1.
double kkt_residual(const ExtremalProblem& problem, const Solution& solution);

/// Raw-coefficient constraint residual max_j |row_j c - target_j|.
double constraint_residual(const ExtremalProblem& problem, const CoeffVector& coeffs);

/// One JSON object {objective, feasibility_residual, stationarity_residual,
/// iterations, converged, seed}.
std::string diagnostics_json(const Solution& solution);

}  // namespace pbergman
