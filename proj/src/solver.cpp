#include "pbergman/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "json.hpp"

namespace pbergman {

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  if (!(step_tolerance > 0.0)) throw std::invalid_argument("step tolerance must be positive");
  if (!(stage_tolerance > 0.0)) throw std::invalid_argument("stage tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (smoothing_schedule.empty()) throw std::invalid_argument("empty smoothing schedule");
  for (std::size_t k = 0; k < smoothing_schedule.size(); ++k) {
    if (!(smoothing_schedule[k] > 0.0)) {
      throw std::invalid_argument("smoothing parameters must be positive");
    }
    if (k > 0 && !(smoothing_schedule[k] < smoothing_schedule[k - 1])) {
      throw std::invalid_argument("smoothing schedule must be strictly decreasing");
    }
  }
  if (smoothing_schedule.back() > 1e-10) {
    throw std::invalid_argument("smoothing schedule must end at or below 1e-10");
  }
}

SmoothedObjective::SmoothedObjective(const ExtremalProblem& problem)
    : exponents_(problem.basis.exponents().begin(), problem.basis.exponents().end()),
      constraints_(problem.constraints),
      p_(problem.p) {
  if (!(p_ > 0.0)) throw std::invalid_argument("p must be positive");
  if (!problem.grid) throw std::invalid_argument("extremal problem has no grid");
  const auto k = static_cast<Eigen::Index>(problem.basis.size());
  const auto mc = static_cast<Eigen::Index>(constraints_.size());
  if (mc >= k) {
    throw std::invalid_argument("number of constraints must be below the basis dimension");
  }

  const auto nodes = problem.grid->nodes();
  weights_.assign(problem.grid->weights().begin(), problem.grid->weights().end());
  const Eigen::MatrixXcd design = problem.basis.design_matrix(nodes);
  const Eigen::Map<const Eigen::VectorXd> w(weights_.data(),
                                            static_cast<Eigen::Index>(weights_.size()));

  scale_.resize(k);
  for (Eigen::Index n = 0; n < k; ++n) {
    const double integral =
        (w.array() * design.col(n).array().abs2().pow(0.5 * p_)).sum();
    scale_(n) = std::pow(integral, -1.0 / p_);
  }

  if (mc > 0) {
    Eigen::MatrixXcd rows(mc, k);
    Eigen::VectorXcd targets(mc);
    for (Eigen::Index j = 0; j < mc; ++j) {
      const auto& c = constraints_[static_cast<std::size_t>(j)];
      if (c.row.size() != k) {
        throw std::invalid_argument("constraint row length differs from the basis size");
      }
      rows.row(j) = c.row.cwiseProduct(scale_.transpose().cast<complex>());
      targets(j) = c.target;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(mc - 1) > 1e-12 * sv(0))) {
      throw NumericalError("constraint rows are linearly dependent");
    }
    particular_ = svd.solve(targets);
    null_basis_ = svd.matrixV().rightCols(k - mc);
  } else {
    particular_ = Eigen::VectorXcd::Zero(k);
    null_basis_ = Eigen::MatrixXcd::Identity(k, k);
  }

  const Eigen::MatrixXcd normalized = design * scale_.cast<complex>().asDiagonal();
  reduced_ = normalized * null_basis_;
  offset_ = normalized * particular_;
}

Eigen::VectorXcd SmoothedObjective::values(const Eigen::VectorXcd& y) const {
  if (y.size() == 0) return offset_;
  return offset_ + reduced_ * y;
}

double SmoothedObjective::value(const Eigen::VectorXcd& y, double eps) const {
  const Eigen::VectorXcd f = values(y);
  const double half_p = 0.5 * p_;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    sum += weights_[static_cast<std::size_t>(i)] * std::pow(std::norm(f(i)) + eps, half_p);
  }
  return sum;
}

double SmoothedObjective::pth_power(const Eigen::VectorXcd& y) const {
  const Eigen::VectorXcd f = values(y);
  const double half_p = 0.5 * p_;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    sum += weights_[static_cast<std::size_t>(i)] * std::pow(std::norm(f(i)), half_p);
  }
  return sum;
}

Eigen::VectorXd SmoothedObjective::gradient(const Eigen::VectorXcd& y, double eps) const {
  const Eigen::VectorXcd f = values(y);
  Eigen::VectorXcd uf(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    uf(i) = weights_[static_cast<std::size_t>(i)] *
            std::pow(std::norm(f(i)) + eps, 0.5 * p_ - 1.0) * f(i);
  }
  const Eigen::VectorXcd g = p_ * (reduced_.adjoint() * uf);
  Eigen::VectorXd out(2 * g.size());
  out.head(g.size()) = g.real();
  out.tail(g.size()) = g.imag();
  return out;
}

Eigen::VectorXcd SmoothedObjective::weighted_least_squares(const Eigen::VectorXd& u) const {
  const Eigen::Index d = dimension();
  if (d == 0) return Eigen::VectorXcd(0);
  const Eigen::MatrixXcd weighted = u.asDiagonal() * reduced_;
  const Eigen::MatrixXcd gram = weighted.adjoint() * reduced_;
  const Eigen::VectorXcd rhs = -(weighted.adjoint() * offset_);
  Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() == Eigen::Success) return llt.solve(rhs);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw NumericalError("weighted normal equations are singular");
  }
  return ldlt.solve(rhs);
}

Eigen::VectorXcd SmoothedObjective::least_squares_start() const {
  const Eigen::Map<const Eigen::VectorXd> w(weights_.data(),
                                            static_cast<Eigen::Index>(weights_.size()));
  return weighted_least_squares(w);
}

CoeffVector SmoothedObjective::coefficients(const Eigen::VectorXcd& y) const {
  Eigen::VectorXcd b = particular_;
  if (y.size() > 0) b += null_basis_ * y;
  CoeffVector out;
  out.exponents = exponents_;
  out.coefficients = b.cwiseProduct(scale_.cast<complex>());
  return out;
}

Eigen::VectorXcd SmoothedObjective::parameters(const CoeffVector& coeffs) const {
  if (coeffs.exponents != exponents_) {
    throw std::invalid_argument("coefficient exponents differ from the problem basis");
  }
  const Eigen::VectorXcd b = coeffs.coefficients.cwiseQuotient(scale_.cast<complex>());
  return null_basis_.adjoint() * (b - particular_);
}

double SmoothedObjective::feasibility_residual(const CoeffVector& coeffs) const {
  double worst = 0.0;
  for (const auto& c : constraints_) {
    worst = std::max(worst, std::abs((c.row * coeffs.coefficients)(0) - c.target));
  }
  return worst;
}

double SmoothedObjective::projected_gradient_norm(const Eigen::VectorXcd& y) const {
  if (dimension() == 0) return 0.0;
  const Eigen::VectorXcd f = values(y);
  Eigen::VectorXcd uf(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double mod = std::abs(f(i));
    uf(i) = mod == 0.0 ? complex{}
                       : weights_[static_cast<std::size_t>(i)] * std::pow(mod, p_ - 2.0) * f(i);
  }
  return (p_ * (reduced_.adjoint() * uf)).norm();
}

Solution minimize_from(const ExtremalProblem& problem, const SolverConfig& config,
                       const Eigen::VectorXcd& start) {
  config.validate();
  const SmoothedObjective objective(problem);
  if (start.size() != objective.dimension()) {
    throw std::invalid_argument("starting point has the wrong dimension");
  }
  const double p = problem.p;
  const auto weights = objective.weights();
  const auto m = static_cast<Eigen::Index>(weights.size());
  // Full IRLS steps overshoot along radial directions by a factor p - 1 for
  // p > 2; 2/p balances radial and tangential contraction.
  const double first_step = p > 2.0 ? 2.0 / p : 1.0;

  Solution out;
  Eigen::VectorXcd y = start;
  std::vector<double> stage_ends;
  bool stage_converged = false;

  for (const double eps : config.smoothing_schedule) {
    double current = objective.value(y, eps);
    out.history.push_back(current);
    stage_converged = false;
    for (int it = 0; it < config.max_iterations; ++it) {
      const Eigen::VectorXcd f = objective.values(y);
      Eigen::VectorXd u(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        u(i) = weights[static_cast<std::size_t>(i)] *
               std::pow(std::norm(f(i)) + eps, 0.5 * p - 1.0);
      }
      const Eigen::VectorXcd direction = objective.weighted_least_squares(u) - y;
      const Eigen::VectorXd grad = objective.gradient(y, eps);
      const double slope = grad.head(direction.size()).dot(direction.real()) +
                           grad.tail(direction.size()).dot(direction.imag());
      const double scale = 1.0 + y.norm();
      if (!(slope < 0.0) || direction.norm() <= 1e-15 * scale) {
        stage_converged = true;
        break;
      }
      double t = first_step;
      double trial = 0.0;
      bool accepted = false;
      for (int back = 0; back < 60; ++back) {
        trial = objective.value(y + t * direction, eps);
        if (trial <= current + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        // No representable decrease left: converged iff the model predicts
        // a decrease at rounding level.
        stage_converged = -slope <= 1e-12 * current;
        break;
      }
      y += t * direction;
      ++out.iterations;
      const double relative = (current - trial) / std::max(current, 1e-300);
      current = trial;
      out.history.push_back(current);
      if (relative <= config.tolerance &&
          t * direction.norm() <= config.step_tolerance * (1.0 + y.norm())) {
        stage_converged = true;
        break;
      }
    }
    stage_ends.push_back(objective.pth_power(y));
  }

  out.converged = stage_converged;
  if (p <= 1.0 && stage_ends.size() >= 2) {
    const double last = stage_ends.back();
    const double prev = stage_ends[stage_ends.size() - 2];
    out.converged = out.converged &&
                    std::abs(last - prev) <= config.stage_tolerance * std::max(last, 1e-300);
  }
  out.coeffs = objective.coefficients(y);
  out.objective = std::pow(objective.pth_power(y), 1.0 / p);
  out.feasibility_residual = objective.feasibility_residual(out.coeffs);
  out.stationarity_residual = p > 1.0 ? objective.projected_gradient_norm(y)
                                      : std::numeric_limits<double>::quiet_NaN();
  out.seed = config.rng_seed;
  if (out.converged && out.feasibility_residual > 1e-8) out.converged = false;
  return out;
}

Solution minimize_pnorm(const ExtremalProblem& problem, const SolverConfig& config) {
  if (!(problem.p >= 1.0)) {
    throw std::invalid_argument("minimize_pnorm needs p >= 1; use multistart_minimize");
  }
  const SmoothedObjective objective(problem);
  return minimize_from(problem, config, objective.least_squares_start());
}

std::vector<Solution> multistart_minimize(const ExtremalProblem& problem,
                                          const SolverConfig& config) {
  config.validate();
  ExtremalProblem convex = problem;
  convex.p = 1.0;
  const Solution anchor = minimize_pnorm(convex, config);

  const SmoothedObjective objective(problem);
  const Eigen::VectorXcd base = objective.parameters(anchor.coeffs);
  const Eigen::Index d = base.size();

  std::vector<Solution> runs;
  for (int r = 0; r < config.restarts; ++r) {
    Eigen::VectorXcd start = base;
    const std::uint64_t seed = config.rng_seed + static_cast<std::uint64_t>(r);
    if (r > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL),
                        static_cast<std::uint32_t>(seed >> 32), 0x9e3779b9U};
      std::mt19937_64 gen(seq);
      std::normal_distribution<double> normal(0.0, config.perturbation_scale);
      for (Eigen::Index j = 0; j < d; ++j) {
        const double re = normal(gen);
        const double im = normal(gen);
        start(j) += complex{re, im};
      }
    }
    Solution run = minimize_from(problem, config, start);
    run.seed = seed;
    if (run.converged) runs.push_back(std::move(run));
  }
  std::stable_sort(runs.begin(), runs.end(), [](const Solution& a, const Solution& b) {
    return a.objective < b.objective;
  });
  return runs;
}

std::vector<Solution> distinct_solutions(const std::vector<Solution>& sorted,
                                         double distance) {
  std::vector<Solution> kept;
  for (const auto& s : sorted) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Solution& k) {
      return (k.coeffs.coefficients - s.coeffs.coefficients).cwiseAbs().maxCoeff() <= distance;
    });
    if (!duplicate) kept.push_back(s);
  }
  return kept;
}

double kkt_residual(const ExtremalProblem& problem, const Solution& solution) {
  if (!(problem.p > 1.0)) {
    throw std::invalid_argument("kkt_residual needs p > 1 (objective not differentiable)");
  }
  const SmoothedObjective objective(problem);
  return objective.projected_gradient_norm(objective.parameters(solution.coeffs));
}

double constraint_residual(const ExtremalProblem& problem, const CoeffVector& coeffs) {
  double worst = 0.0;
  for (const auto& c : problem.constraints) {
    worst = std::max(worst, std::abs((c.row * coeffs.coefficients)(0) - c.target));
  }
  return worst;
}

std::string diagnostics_json(const Solution& solution) {
  nlohmann::ordered_json j;
  j["objective"] = solution.objective;
  j["feasibility_residual"] = solution.feasibility_residual;
  if (std::isfinite(solution.stationarity_residual)) {
    j["stationarity_residual"] = solution.stationarity_residual;
  } else {
    j["stationarity_residual"] = nullptr;
  }
  j["iterations"] = solution.iterations;
  j["converged"] = solution.converged;
  j["seed"] = solution.seed;
  return j.dump();
}

}  // namespace pbergman
