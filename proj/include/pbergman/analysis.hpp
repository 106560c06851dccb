#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbergman/kernel.hpp"
#include "pbergman/solver.hpp"

namespace pbergman {

/// A log-log fit with too few points above the noise floor.
class DegenerateFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LeviRecord {
  complex z;
  complex direction;
  double p = 0.0;
  double levi = 0.0;         // i d dbar log K_p(z; X)
  double b_p_squared = 0.0;  // B_p(z; X)^2
  double gap = 0.0;          // levi - b_p_squared
  double fd_step = 0.0;
};

struct HolderFit {
  complex z_prime;  // evaluation point (unused by the H_p fit)
  complex w;        // base point
  double p = 0.0;
  std::vector<double> radii;
  std::vector<double> deltas;
  double slope = 0.0;
  double intercept = 0.0;  // log of the prefactor
  double r_squared = 0.0;
  std::size_t points_used = 0;

  double fitted(double r) const;
};

struct DpEstimate {
  double p = 0.0;
  complex z;
  /// Multistart lower bound for the sup over maximizer pairs.
  double d_p = 0.0;
  double K_p = 0.0;  // from the best run
  int restarts = 0;
  std::size_t near_optimal = 0;
  std::vector<double> pairwise;  // d(f_i, f_j) over near-optimal pairs, i < j
  std::vector<Solution> solutions;
};

struct LimitRow {
  double p = 0.0;
  double K_p = 0.0;
  double d_p = 0.0;
  int restarts = 0;
  bool ok = false;
  std::string status;
};

struct LimitRecord {
  complex z;
  std::vector<LimitRow> rows;
};

struct AnalysisOptions {
  /// Finite-difference step of the Levi-form stencil, in units of |X|.
  double fd_step = 1e-2;
  int directions = 8;
  double noise_floor = 1e-9;
  /// Worker threads for independent solver calls.
  int jobs = 1;
};

/// 1/4 of the (s, t)-Laplacian of log_k(z + (s + i t) X) at 0: five-point
/// second differences along each axis at `step` and `step / 2`, combined by
/// one Richardson extrapolation.
double levi_form(const std::function<double(complex)>& log_k, complex z, complex direction,
                 double step);

double levi_form_log_kp(const KernelEngine& engine, double p, complex z, complex direction,
                        const AnalysisOptions& options = {});

/// Levi form against B_p^2 at the origin of a disk.
LeviRecord levi_comparison(const KernelEngine& engine, double p, complex direction,
                          const AnalysisOptions& options = {});

/// Least squares on (log r, log delta) over the points with delta above the
/// noise floor.  Throws DegenerateFitError with fewer than two such points.
HolderFit fit_loglog(std::vector<double> radii, std::vector<double> deltas,
                     double noise_floor = 1e-9);

/// Fit of r -> max_phi |m_p(z', w + r e^{i phi}) - m_p(z', w)|.
HolderFit holder_exponent(const KernelEngine& engine, double p, complex z_prime, complex w,
                          const std::vector<double>& radii,
                          const AnalysisOptions& options = {});

/// Fit of r -> max_phi H_p(z, z + r e^{i phi}).
HolderFit hp_scaling_exponent(const KernelEngine& engine, double p, complex z,
                              const std::vector<double>& radii,
                              const AnalysisOptions& options = {});

/// sum_i w_i |f(z_i) - g(z_i)|^p on the engine grid.
double pnorm_distance(const KernelEngine& engine, const CoeffVector& f,
                      const CoeffVector& g, double p);

/// Multistart surrogate for d_p(z), 0 < p <= 1; a lower bound only.
DpEstimate dp_estimate(const KernelEngine& engine, double p, complex z,
                       const AnalysisOptions& options = {});

LimitRecord limit_sweep(const KernelEngine& engine, complex z, const std::vector<double>& p_list,
                        const AnalysisOptions& options = {});

/// Runs fn(0..count-1) on up to `jobs` threads; fn must be thread-safe.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace pbergman
