#include "pbergman/kernel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace pbergman {

KernelEngine::KernelEngine(KernelSettings settings)
    : KernelEngine(settings, std::make_shared<const QuadratureGrid>(
                                 settings.domain, settings.radial_count,
                                 settings.angular_count)) {}

KernelEngine::KernelEngine(KernelSettings settings,
                           std::shared_ptr<const QuadratureGrid> grid)
    : settings_(std::move(settings)), grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("kernel engine needs a grid");
  if (!(grid_->domain() == settings_.domain)) {
    throw std::invalid_argument("grid was built for a different domain");
  }
  if (settings_.degree < 1 || settings_.degree > 48) {
    throw std::invalid_argument("basis degree must lie in [1, 48]");
  }
  if (settings_.n_min > settings_.degree) {
    throw std::invalid_argument("n_min exceeds the basis degree");
  }
  if (!(settings_.margin > 0.0 && settings_.margin < 1.0)) {
    throw std::invalid_argument("boundary margin must lie in (0, 1)");
  }
  settings_.solver.validate();
}

BasisSpec KernelEngine::basis(double p) const {
  return BasisSpec::admissible(settings_.domain, p, settings_.n_min, settings_.degree);
}

void KernelEngine::check_point(complex z, const BasisSpec& basis) const {
  const auto& d = settings_.domain;
  const double delta = settings_.margin * d.outer_radius();
  const double r = std::abs(z);
  char buf[200];
  if (!(r < d.outer_radius() - delta)) {
    std::snprintf(buf, sizeof buf,
                  "point %.17g%+.17gi violates the boundary margin: need |z| < %.17g "
                  "(outer radius minus margin %.3g)",
                  z.real(), z.imag(), d.outer_radius() - delta, delta);
    throw MarginError(buf);
  }
  if (d.kind() == DomainKind::annulus && !(r > d.inner_radius() + delta)) {
    std::snprintf(buf, sizeof buf,
                  "point %.17g%+.17gi violates the boundary margin: need |z| > %.17g",
                  z.real(), z.imag(), d.inner_radius() + delta);
    throw MarginError(buf);
  }
  if (basis.has_poles() && r == 0.0) {
    throw MarginError("point evaluation at z = 0 with pole terms in the basis");
  }
}

ExtremalProblem KernelEngine::mp_problem(double p, complex z) const {
  BasisSpec b = basis(p);
  check_point(z, b);
  ExtremalProblem problem{b, grid_, p, {}};
  problem.constraints.push_back({b.evaluation_row(z), complex{1.0, 0.0}});
  return problem;
}

ExtremalProblem KernelEngine::metric_problem(double p, complex z) const {
  BasisSpec b = basis(p);
  check_point(z, b);
  ExtremalProblem problem{b, grid_, p, {}};
  problem.constraints.push_back({b.evaluation_row(z), complex{}});
  problem.constraints.push_back({b.derivative_row(z), complex{1.0, 0.0}});
  return problem;
}

std::shared_ptr<const KernelResult> KernelEngine::cached_kernel(double p, complex z) const {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("kernel quantities need p >= 1; use the multistart analysis for p < 1");
  }
  const Key key{p, z.real(), z.imag()};
  {
    std::lock_guard lock(mutex_);
    if (auto it = kernel_cache_.find(key); it != kernel_cache_.end()) return it->second;
  }
  const ExtremalProblem problem = mp_problem(p, z);
  auto result = std::make_shared<KernelResult>();
  result->z = z;
  result->p = p;
  result->minimizer = minimize_pnorm(problem, settings_.solver);
  result->m_p = result->minimizer.objective;
  result->K_p = std::pow(result->m_p, -p);
  result->basis_degree = settings_.degree;
  std::lock_guard lock(mutex_);
  return kernel_cache_.emplace(key, std::move(result)).first->second;
}

KernelResult KernelEngine::mp_minimizer(double p, complex z) const {
  return *cached_kernel(p, z);
}

complex KernelEngine::offdiag_kernel(double p, complex z, complex w) const {
  const auto at_w = cached_kernel(p, w);
  check_point(z, basis(p));
  return evaluate(at_w->minimizer.coeffs, z) * at_w->K_p;
}

double KernelEngine::h_function(double p, complex z, complex w) const {
  const auto at_z = cached_kernel(p, z);
  const auto at_w = cached_kernel(p, w);
  const complex kzw = evaluate(at_w->minimizer.coeffs, z) * at_w->K_p;
  const complex kwz = evaluate(at_z->minimizer.coeffs, w) * at_z->K_p;
  return at_z->K_p + at_w->K_p - (kzw + kwz).real();
}

MetricResult KernelEngine::metric_at(double p, complex z, complex direction) const {
  if (direction == complex{}) throw std::invalid_argument("metric direction must be nonzero");
  const auto at_z = cached_kernel(p, z);
  const Key key{p, z.real(), z.imag()};
  std::shared_ptr<const Solution> extremal;
  {
    std::lock_guard lock(mutex_);
    if (auto it = metric_cache_.find(key); it != metric_cache_.end()) extremal = it->second;
  }
  if (!extremal) {
    // |X f'(z)| only depends on |X|; solve for the unit direction and scale.
    auto solved = std::make_shared<const Solution>(
        minimize_pnorm(metric_problem(p, z), settings_.solver));
    std::lock_guard lock(mutex_);
    extremal = metric_cache_.emplace(key, std::move(solved)).first->second;
  }
  MetricResult out;
  out.z = z;
  out.direction = direction;
  out.p = p;
  out.extremal = *extremal;
  out.B_p = std::abs(direction) * at_z->m_p / extremal->objective;
  return out;
}

std::size_t KernelEngine::cache_size() const {
  std::lock_guard lock(mutex_);
  return kernel_cache_.size() + metric_cache_.size();
}

std::string kernel_json(const KernelResult& result) {
  nlohmann::ordered_json j;
  j["z"] = {{"re", result.z.real()}, {"im", result.z.imag()}};
  j["p"] = result.p;
  j["m_p"] = result.m_p;
  j["K_p"] = result.K_p;
  j["degree"] = result.basis_degree;
  j["converged"] = result.minimizer.converged;
  j["diagnostics"] = nlohmann::ordered_json::parse(diagnostics_json(result.minimizer));
  return j.dump();
}

}  // namespace pbergman
