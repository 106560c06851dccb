#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>

#include "pbergman/geometry.hpp"
#include "pbergman/holo.hpp"
#include "pbergman/solver.hpp"

namespace pbergman {

/// Raised for interior points too close to the boundary of the domain.
class MarginError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct KernelResult {
  complex z;
  double p = 0.0;
  double m_p = 0.0;  // min ||f||_p subject to f(z) = 1
  double K_p = 0.0;  // m_p^(-p); a lower bound for the untruncated kernel
  Solution minimizer;
  int basis_degree = 0;
};

struct MetricResult {
  complex z;
  complex direction;  // as supplied; B_p scales with |direction|
  double p = 0.0;
  double B_p = 0.0;
  Solution extremal;  // min ||f||_p subject to f(z) = 0, X f'(z) = 1, |X| = 1
};

struct KernelSettings {
  Domain domain = Domain::disk(1.0);
  int degree = 16;
  /// Lowest exponent tried; non-admissible exponents are dropped per p.
  int n_min = 0;
  std::size_t radial_count = 64;
  std::size_t angular_count = 128;
  /// Boundary margin as a fraction of the outer radius.
  double margin = 0.05;
  SolverConfig solver{};
};

/// Extremal-problem front end for one domain, truncation degree and grid.
/// Minimizers are cached per (p, z), so H_p and sweeps reuse them; the cache
/// is safe under concurrent use.
class KernelEngine {
 public:
  explicit KernelEngine(KernelSettings settings);
  KernelEngine(KernelSettings settings, std::shared_ptr<const QuadratureGrid> grid);

  const KernelSettings& settings() const noexcept { return settings_; }
  const Domain& domain() const noexcept { return settings_.domain; }
  std::shared_ptr<const QuadratureGrid> grid() const noexcept { return grid_; }

  BasisSpec basis(double p) const;
  /// Throws MarginError unless z is interior with the configured margin.
  void check_point(complex z, const BasisSpec& basis) const;

  /// The problem min ||f||_p subject to f(z) = 1, for any p > 0.
  ExtremalProblem mp_problem(double p, complex z) const;
  /// The problem min ||f||_p subject to f(z) = 0, f'(z) = 1.
  ExtremalProblem metric_problem(double p, complex z) const;

  /// m_p(z), K_p(z) and the minimizer m_p(., z); p >= 1.
  KernelResult mp_minimizer(double p, complex z) const;
  /// K_p(z, w) = m_p(z, w) K_p(w).
  complex offdiag_kernel(double p, complex z, complex w) const;
  /// H_p(z, w) = K_p(z) + K_p(w) - Re{K_p(z, w) + K_p(w, z)}.
  double h_function(double p, complex z, complex w) const;
  /// B_p(z; X) = K_p(z)^(-1/p) / min{||f||_p : f(z) = 0, X f(z) = 1}.
  MetricResult metric_at(double p, complex z, complex direction) const;

  std::size_t cache_size() const;

 private:
  KernelSettings settings_;
  std::shared_ptr<const QuadratureGrid> grid_;

  using Key = std::tuple<double, double, double>;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::shared_ptr<const KernelResult>> kernel_cache_;
  mutable std::map<Key, std::shared_ptr<const Solution>> metric_cache_;

  std::shared_ptr<const KernelResult> cached_kernel(double p, complex z) const;
};

/// {z, p, m_p, K_p, degree, converged, diagnostics}
std::string kernel_json(const KernelResult& result);

}  // namespace pbergman
