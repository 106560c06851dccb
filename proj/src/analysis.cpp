#include "pbergman/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace pbergman {

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(workers, count); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

double levi_form(const std::function<double(complex)>& log_k, complex z, complex direction,
                 double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  if (direction == complex{}) throw std::invalid_argument("direction must be nonzero");
  const double center = log_k(z);
  auto second = [&](complex axis, double h) {
    const complex e = axis * direction;
    const double f1 = log_k(z + h * e);
    const double fm1 = log_k(z - h * e);
    const double f2 = log_k(z + 2.0 * h * e);
    const double fm2 = log_k(z - 2.0 * h * e);
    return (-f2 + 16.0 * f1 - 30.0 * center + 16.0 * fm1 - fm2) / (12.0 * h * h);
  };
  auto laplacian = [&](double h) {
    return second(complex{1.0, 0.0}, h) + second(complex{0.0, 1.0}, h);
  };
  const double coarse = laplacian(step);
  const double fine = laplacian(0.5 * step);
  return 0.25 * (16.0 * fine - coarse) / 15.0;
}

double levi_form_log_kp(const KernelEngine& engine, double p, complex z, complex direction,
                        const AnalysisOptions& options) {
  const double h = options.fd_step;
  const BasisSpec basis = engine.basis(p);
  // Reject the whole stencil up front rather than failing halfway.
  for (complex axis : {complex{1, 0}, complex{-1, 0}, complex{0, 1}, complex{0, -1}}) {
    engine.check_point(z + 2.0 * h * axis * direction, basis);
  }
  // Warm the cache in parallel; levi_form then only reads.
  std::vector<complex> stencil{z};
  for (double s : {h, 0.5 * h}) {
    for (complex axis : {complex{1, 0}, complex{-1, 0}, complex{0, 1}, complex{0, -1}}) {
      stencil.push_back(z + s * axis * direction);
      stencil.push_back(z + 2.0 * s * axis * direction);
    }
  }
  parallel_for(stencil.size(), options.jobs, [&](std::size_t i) {
    const KernelResult r = engine.mp_minimizer(p, stencil[i]);
    if (!r.minimizer.converged) {
      throw NumericalError("solver did not converge at a Levi-form stencil point");
    }
  });
  return levi_form([&](complex point) { return std::log(engine.mp_minimizer(p, point).K_p); },
                   z, direction, h);
}

LeviRecord levi_comparison(const KernelEngine& engine, double p, complex direction,
                          const AnalysisOptions& options) {
  if (engine.domain().kind() != DomainKind::disk) {
    throw std::invalid_argument("the Levi-form comparison runs on a complete circular domain (disk)");
  }
  LeviRecord rec;
  rec.z = complex{};
  rec.direction = direction;
  rec.p = p;
  rec.fd_step = options.fd_step;
  rec.levi = levi_form_log_kp(engine, p, rec.z, direction, options);
  const MetricResult metric = engine.metric_at(p, rec.z, direction);
  if (!metric.extremal.converged) {
    throw NumericalError("solver did not converge on the metric problem");
  }
  rec.b_p_squared = metric.B_p * metric.B_p;
  rec.gap = rec.levi - rec.b_p_squared;
  return rec;
}

double HolderFit::fitted(double r) const { return std::exp(intercept) * std::pow(r, slope); }

HolderFit fit_loglog(std::vector<double> radii, std::vector<double> deltas, double noise_floor) {
  if (radii.size() != deltas.size()) {
    throw std::invalid_argument("radii and deltas are not aligned");
  }
  HolderFit fit;
  fit.radii = std::move(radii);
  fit.deltas = std::move(deltas);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    if (fit.radii[i] > 0.0 && fit.deltas[i] > noise_floor) {
      xs.push_back(std::log(fit.radii[i]));
      ys.push_back(std::log(fit.deltas[i]));
    }
  }
  if (xs.size() < 2) {
    throw DegenerateFitError("degenerate fit: fewer than two probes above the noise floor");
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFitError("degenerate fit: all probe radii coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.points_used = xs.size();
  return fit;
}

namespace {

void check_radii(const std::vector<double>& radii) {
  if (radii.size() < 2) {
    throw DegenerateFitError("degenerate fit: need at least two probe radii");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw std::invalid_argument("probe radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw std::invalid_argument("probe radii must be strictly decreasing");
    }
  }
  if (radii.front() / radii.back() < std::pow(10.0, 1.5) * (1.0 - 1e-12)) {
    throw std::invalid_argument("probe radii must span at least 1.5 decades");
  }
}

std::vector<complex> probe_directions(int count) {
  if (count < 1) throw std::invalid_argument("need at least one probe direction");
  std::vector<complex> out;
  for (int k = 0; k < count; ++k) {
    out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / count));
  }
  return out;
}

}  // namespace

HolderFit holder_exponent(const KernelEngine& engine, double p, complex z_prime, complex w,
                          const std::vector<double>& radii, const AnalysisOptions& options) {
  if (!(p > 1.0)) throw std::invalid_argument("Hoelder probe needs p > 1");
  check_radii(radii);
  const auto dirs = probe_directions(options.directions);
  const BasisSpec basis = engine.basis(p);
  engine.check_point(z_prime, basis);
  std::vector<complex> probes;
  for (double r : radii) {
    for (complex e : dirs) probes.push_back(w + r * e);
  }
  for (complex z : probes) engine.check_point(z, basis);

  const KernelResult base = engine.mp_minimizer(p, w);
  const complex reference = evaluate(base.minimizer.coeffs, z_prime);
  std::vector<double> values(probes.size());
  parallel_for(probes.size(), options.jobs, [&](std::size_t i) {
    const KernelResult r = engine.mp_minimizer(p, probes[i]);
    values[i] = std::abs(evaluate(r.minimizer.coeffs, z_prime) - reference);
  });
  std::vector<double> deltas(radii.size(), 0.0);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    auto& d = deltas[i / dirs.size()];
    d = std::max(d, values[i]);
  }
  HolderFit fit = fit_loglog(radii, std::move(deltas), options.noise_floor);
  fit.z_prime = z_prime;
  fit.w = w;
  fit.p = p;
  return fit;
}

HolderFit hp_scaling_exponent(const KernelEngine& engine, double p, complex z,
                              const std::vector<double>& radii, const AnalysisOptions& options) {
  if (!(p > 1.0)) throw std::invalid_argument("H_p scaling probe needs p > 1");
  check_radii(radii);
  const auto dirs = probe_directions(options.directions);
  const BasisSpec basis = engine.basis(p);
  engine.check_point(z, basis);
  std::vector<complex> probes;
  for (double r : radii) {
    for (complex e : dirs) probes.push_back(z + r * e);
  }
  for (complex w : probes) engine.check_point(w, basis);
  std::vector<double> values(probes.size());
  parallel_for(probes.size(), options.jobs,
               [&](std::size_t i) { values[i] = engine.h_function(p, z, probes[i]); });
  std::vector<double> deltas(radii.size(), 0.0);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    auto& d = deltas[i / dirs.size()];
    d = std::max(d, values[i]);
  }
  HolderFit fit = fit_loglog(radii, std::move(deltas), options.noise_floor);
  fit.z_prime = z;
  fit.w = z;
  fit.p = p;
  return fit;
}

double pnorm_distance(const KernelEngine& engine, const CoeffVector& f, const CoeffVector& g,
                      double p) {
  if (f.exponents != g.exponents) {
    throw std::invalid_argument("distance between series on different bases");
  }
  CoeffVector diff{f.exponents, f.coefficients - g.coefficients};
  const auto grid = engine.grid();
  return lp_integral(*grid, evaluate_on(diff, grid->nodes()), p);
}

DpEstimate dp_estimate(const KernelEngine& engine, double p, complex z,
                       const AnalysisOptions& /*options*/) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("d_p estimate needs 0 < p <= 1");
  const ExtremalProblem problem = engine.mp_problem(p, z);
  const SolverConfig& config = engine.settings().solver;
  DpEstimate out;
  out.p = p;
  out.z = z;
  out.restarts = config.restarts;
  out.solutions = multistart_minimize(problem, config);
  if (out.solutions.empty()) {
    throw NumericalError("no multistart run converged");
  }
  const double best = out.solutions.front().objective;
  out.K_p = std::pow(best, -p);
  std::vector<const Solution*> near;
  for (const auto& s : out.solutions) {
    if (s.objective <= best * (1.0 + 1e-4)) near.push_back(&s);
  }
  out.near_optimal = near.size();
  for (std::size_t i = 0; i < near.size(); ++i) {
    for (std::size_t j = i + 1; j < near.size(); ++j) {
      const double d = pnorm_distance(engine, near[i]->coeffs, near[j]->coeffs, p);
      out.pairwise.push_back(d);
      out.d_p = std::max(out.d_p, d);
    }
  }
  return out;
}

LimitRecord limit_sweep(const KernelEngine& engine, complex z, const std::vector<double>& p_list,
                        const AnalysisOptions& options) {
  if (p_list.empty()) throw std::invalid_argument("empty p list");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    if (!(p_list[i] > 0.0 && p_list[i] <= 1.0)) {
      throw std::invalid_argument("limit sweep needs every p in (0, 1]");
    }
    if (i > 0 && !(p_list[i] > p_list[i - 1])) {
      throw std::invalid_argument("limit sweep p list must be ascending");
    }
  }
  LimitRecord rec;
  rec.z = z;
  rec.rows.resize(p_list.size());
  parallel_for(p_list.size(), options.jobs, [&](std::size_t i) {
    LimitRow& row = rec.rows[i];
    row.p = p_list[i];
    row.restarts = engine.settings().solver.restarts;
    try {
      const DpEstimate est = dp_estimate(engine, row.p, z, options);
      row.K_p = est.K_p;
      row.d_p = est.d_p;
      row.ok = true;
      row.status = "ok";
    } catch (const std::exception& e) {
      row.ok = false;
      row.status = e.what();
    }
  });
  return rec;
}

}  // namespace pbergman
