#include "pbergman/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "pbergman/holo.hpp"

namespace pbergman {

double lacunarity_constant(std::span<const std::int64_t> exponents) {
  if (exponents.empty()) throw LacunarityError("lacunary sequence needs at least one exponent");
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k] < 1) throw LacunarityError("lacunary exponents must be positive");
    if (k > 0 && exponents[k] <= exponents[k - 1]) {
      throw LacunarityError("lacunary exponents must be strictly increasing");
    }
  }
  double ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < exponents.size(); ++k) {
    ratio = std::min(ratio, static_cast<double>(exponents[k]) /
                                static_cast<double>(exponents[k - 1]));
  }
  return ratio;
}

LacunarySeries::LacunarySeries(std::vector<std::int64_t> exponents,
                               std::vector<complex> coefficients)
    : exponents_(std::move(exponents)), coefficients_(std::move(coefficients)) {
  if (exponents_.size() != coefficients_.size()) {
    throw std::invalid_argument("exponents and coefficients differ in length");
  }
  lacunarity_ = lacunarity_constant(exponents_);
  if (!(lacunarity_ > 1.0)) throw LacunarityError("lacunarity constant must exceed 1");
}

bool LacunarySeries::is_zero() const noexcept {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](complex a) { return a == complex{}; });
}

complex LacunarySeries::operator()(complex z) const {
  complex sum{};
  for (std::size_t k = 0; k < size(); ++k) {
    sum += coefficients_[k] * integer_power(z, exponents_[k]);
  }
  return sum;
}

LacunarySeries LacunarySeries::scaled(complex c) const {
  std::vector<complex> coeffs(coefficients_);
  for (auto& a : coeffs) a *= c;
  return LacunarySeries(exponents_, std::move(coeffs));
}

RadialRule RadialRule::build(int levels_toward_one, std::size_t order, int levels_toward_zero) {
  const auto gl = gauss_legendre(order);
  RadialRule rule;
  auto add_panel = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t i = 0; i < order; ++i) {
      const double r = mid + half * gl.nodes[i];
      rule.nodes.push_back(r);
      rule.weights.push_back(half * gl.weights[i] * 2.0 * std::numbers::pi * r);
    }
  };
  add_panel(0.0, std::ldexp(1.0, -levels_toward_zero));
  for (int i = levels_toward_zero; i >= 2; --i) {
    add_panel(std::ldexp(1.0, -i), std::ldexp(1.0, -(i - 1)));
  }
  for (int j = 1; j <= levels_toward_one; ++j) {
    add_panel(1.0 - std::ldexp(1.0, -j), 1.0 - std::ldexp(1.0, -(j + 1)));
  }
  return rule;
}

namespace {

double radial_density(std::span<const double> squared, std::span<const std::int64_t> exponents,
                      std::size_t first, double r, double half_p) {
  double sum = 0.0;
  for (std::size_t k = first; k < exponents.size(); ++k) {
    if (squared[k] == 0.0) continue;
    sum += squared[k] * std::pow(r, 2.0 * static_cast<double>(exponents[k]));
  }
  return std::pow(sum, half_p);
}

}  // namespace

double criterion_integral(const LacunarySeries& series, double p,
                          const RadialQuadratureConfig& config) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (series.is_zero()) return 0.0;
  std::vector<double> squared;
  for (complex a : series.coefficients()) squared.push_back(std::norm(a));
  const auto exps = series.exponents();
  const double half_p = 0.5 * p;
  const auto gl = gauss_legendre(config.order);

  auto panel = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    double s = 0.0;
    for (std::size_t i = 0; i < config.order; ++i) {
      const double r = mid + half * gl.nodes[i];
      s += gl.weights[i] * radial_density(squared, exps, 0, r, half_p) * 2.0 * std::numbers::pi * r;
    }
    return half * s;
  };

  // [0, 1/2] in dyadic panels toward the origin, where the integrand can be
  // a fractional power of r.
  double total = panel(0.0, std::ldexp(1.0, -40));
  for (int i = 40; i >= 2; --i) total += panel(std::ldexp(1.0, -i), std::ldexp(1.0, -(i - 1)));

  // The integrand increases in r and is bounded by its value at r = 1.
  double bound_at_one = 0.0;
  for (double s : squared) bound_at_one += s;
  bound_at_one = std::pow(bound_at_one, half_p) * 2.0 * std::numbers::pi;

  for (int j = 1; j <= config.max_levels; ++j) {
    const double a = 1.0 - std::ldexp(1.0, -j);
    const double b = 1.0 - std::ldexp(1.0, -(j + 1));
    const double piece = panel(a, b);
    total += piece;
    const double remaining = bound_at_one * (1.0 - b);
    if (piece <= config.relative_tolerance * total &&
        remaining <= 1e-3 * config.relative_tolerance * total) {
      return total;
    }
  }
  throw std::runtime_error("criterion integral did not converge within the refinement levels");
}

double tail_integral(std::span<const complex> coefficients, std::span<const std::int64_t> exponents,
                     std::size_t first_term, double p, const RadialRule& rule) {
  if (coefficients.size() != exponents.size()) {
    throw std::invalid_argument("tail integral coefficients and exponents differ in length");
  }
  std::vector<double> squared;
  for (complex a : coefficients) squared.push_back(std::norm(a));
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    total += rule.weights[i] * radial_density(squared, exponents, first_term, rule.nodes[i], 0.5 * p);
  }
  return total;
}

namespace {

void require_unit_disk(const QuadratureGrid& grid) {
  const auto& d = grid.domain();
  if (d.kind() == DomainKind::annulus || d.outer_radius() != 1.0) {
    throw std::invalid_argument("lacunary integrals need a unit-disk grid, got " + d.to_string());
  }
}

// Values of f on one circle of radius r at the M trapezoid nodes, using exact
// integer phase reduction (lambda * j mod M).
void circle_values(const LacunarySeries& series, double r, std::span<const complex> roots,
                   std::vector<complex>& out) {
  const std::size_t m = roots.size();
  out.assign(m, complex{});
  for (std::size_t k = 0; k < series.size(); ++k) {
    const complex a = series.coefficients()[k];
    if (a == complex{}) continue;
    const auto lambda = static_cast<std::uint64_t>(series.exponents()[k]);
    const complex amp = a * std::pow(r, static_cast<double>(lambda));
    if (amp == complex{}) continue;
    const std::uint64_t step = lambda % m;
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < m; ++j) {
      out[j] += amp * roots[idx];
      idx += step;
      if (idx >= m) idx -= m;
    }
  }
}

std::vector<complex> roots_of_unity(std::size_t m) {
  std::vector<complex> roots(m);
  for (std::size_t j = 0; j < m; ++j) {
    roots[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                   static_cast<double>(m));
  }
  return roots;
}

}  // namespace

double direct_lp(const LacunarySeries& series, double p, const QuadratureGrid& grid) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  require_unit_disk(grid);
  if (series.is_zero()) return 0.0;
  const auto roots = roots_of_unity(grid.angular_count());
  std::vector<complex> ring;
  double total = 0.0;
  for (std::size_t i = 0; i < grid.radial_count(); ++i) {
    circle_values(series, grid.radii()[i], roots, ring);
    double s = 0.0;
    for (complex v : ring) s += std::pow(std::norm(v), 0.5 * p);
    total += grid.ring_weights()[i] * s;
  }
  return total;
}

double equivalence_ratio(const LacunarySeries& series, double p, const QuadratureGrid& grid,
                         const RadialQuadratureConfig& config) {
  if (series.is_zero()) throw std::invalid_argument("equivalence ratio of the zero series");
  const double criterion = criterion_integral(series, p, config);
  if (!(criterion > 0.0)) {
    throw std::logic_error("criterion integral vanished for a nonzero series");
  }
  return direct_lp(series, p, grid) / criterion;
}

double circle_norm_ratio(const LacunarySeries& series, double r, double p, std::size_t nodes) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("circle radius must lie in (0, 1)");
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (series.is_zero()) throw std::invalid_argument("circle norm ratio of the zero series");
  if (series.max_lambda() > LacunarySeries::max_exponent) {
    throw std::invalid_argument("exponent above the circle-quadrature cap 2^20");
  }
  const auto minimum = static_cast<std::size_t>(8 * series.max_lambda());
  if (nodes == 0) nodes = minimum;
  if (nodes < minimum) {
    throw std::invalid_argument("undersampled circle quadrature: need at least 8 * lambda_max nodes");
  }
  const auto roots = roots_of_unity(nodes);
  std::vector<complex> values;
  circle_values(series, r, roots, values);
  double lp = 0.0;
  double l2 = 0.0;
  for (complex v : values) {
    const double mod2 = std::norm(v);
    lp += std::pow(mod2, 0.5 * p);
    l2 += mod2;
  }
  const auto m = static_cast<double>(nodes);
  return std::pow(lp / m, 1.0 / p) / std::sqrt(l2 / m);
}

double triangle_constant(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  return p <= 2.0 ? std::pow(2.0, 0.5 * p) : std::pow(2.0, p - 1.0);
}

bool tail_triangle_check(const LacunarySeries& a, const LacunarySeries& b, double p,
                         std::size_t first_term) {
  if (!std::equal(a.exponents().begin(), a.exponents().end(), b.exponents().begin(),
                  b.exponents().end())) {
    throw std::invalid_argument("tail comparison needs aligned exponent sets");
  }
  if (first_term < 1 || first_term > a.size()) {
    throw std::invalid_argument("tail index N must lie in [1, series length]");
  }
  static const RadialRule rule = RadialRule::build(60, 24);
  std::vector<complex> diff(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) diff[k] = a.coefficients()[k] - b.coefficients()[k];
  const std::size_t first = first_term - 1;
  const double lhs = tail_integral(diff, a.exponents(), first, p, rule);
  const double ia = tail_integral(a.coefficients(), a.exponents(), first, p, rule);
  const double ib = tail_integral(b.coefficients(), b.exponents(), first, p, rule);
  const double rhs = triangle_constant(p) * (ia + ib);
  return lhs <= rhs * (1.0 + 1e-12) + 1e-300;
}

LacunarySeries read_series_csv(std::istream& in) {
  std::vector<std::int64_t> exponents;
  std::vector<complex> coeffs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("lambda", 0) == 0) continue;
    std::istringstream row(line);
    std::string l;
    std::string re;
    std::string im;
    if (!std::getline(row, l, ',') || !std::getline(row, re, ',') || !std::getline(row, im)) {
      throw std::invalid_argument("malformed series row '" + line + "'");
    }
    exponents.push_back(std::stoll(l));
    coeffs.emplace_back(std::stod(re), std::stod(im));
  }
  return LacunarySeries(std::move(exponents), std::move(coeffs));
}

std::string lacunary_json(double p, const LacunarySeries& series, double criterion,
                          double direct) {
  nlohmann::ordered_json j;
  j["p"] = p;
  if (std::isfinite(series.lacunarity())) {
    j["A"] = series.lacunarity();
  } else {
    j["A"] = nullptr;
  }
  j["criterion"] = criterion;
  j["direct"] = direct;
  if (criterion > 0.0) {
    j["ratio"] = direct / criterion;
  } else {
    j["ratio"] = nullptr;
  }
  j["integrable"] = std::isfinite(criterion);
  return j.dump();
}

}  // namespace pbergman
