#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pbergman/geometry.hpp"

namespace pbergman {

class LacunarityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// min_k lambda_{k+1} / lambda_k; +infinity for a single exponent.
double lacunarity_constant(std::span<const std::int64_t> exponents);

/// f(z) = sum_k a_k z^{lambda_k} with lambda_{k+1} >= A lambda_k, A > 1.
class LacunarySeries {
 public:
  static constexpr std::int64_t max_exponent = std::int64_t{1} << 20;

  LacunarySeries(std::vector<std::int64_t> exponents, std::vector<complex> coefficients);

  std::span<const std::int64_t> exponents() const noexcept { return exponents_; }
  std::span<const complex> coefficients() const noexcept { return coefficients_; }
  double lacunarity() const noexcept { return lacunarity_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  std::int64_t max_lambda() const noexcept { return exponents_.back(); }
  bool is_zero() const noexcept;

  complex operator()(complex z) const;
  /// Same exponents, every coefficient multiplied by c.
  LacunarySeries scaled(complex c) const;

 private:
  std::vector<std::int64_t> exponents_;
  std::vector<complex> coefficients_;
  double lacunarity_;
};

struct RadialQuadratureConfig {
  std::size_t order = 24;        // Gauss-Legendre nodes per panel
  double relative_tolerance = 1e-8;
  int max_levels = 60;           // dyadic panels toward r = 1
};

/// Gauss-Legendre panels on [0, 1): dyadic toward r = 0 and geometric toward
/// r = 1 ([1 - 2^-j, 1 - 2^-(j+1)]), carrying the area weight 2 pi r.
struct RadialRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static RadialRule build(int levels_toward_one, std::size_t order, int levels_toward_zero = 40);
};

/// int_0^1 (sum_k |a_k|^2 r^{2 lambda_k})^{p/2} 2 pi r dr, refined toward
/// r = 1 until the remaining tail is below the relative tolerance.
double criterion_integral(const LacunarySeries& series, double p,
                          const RadialQuadratureConfig& config = {});

/// The same integrand on a fixed rule, restricted to terms k >= first_term
/// (0-based) and with coefficient differences a_k - b_k.
double tail_integral(std::span<const complex> coefficients, std::span<const std::int64_t> exponents,
                     std::size_t first_term, double p, const RadialRule& rule);

/// Area integral of |f|^p on a unit-disk grid.
double direct_lp(const LacunarySeries& series, double p, const QuadratureGrid& grid);

/// direct_lp / criterion_integral.
double equivalence_ratio(const LacunarySeries& series, double p, const QuadratureGrid& grid,
                         const RadialQuadratureConfig& config = {});

/// ||f(r e^{2 pi i t})||_{L^p(dt)} / ||f(r e^{2 pi i t})||_{L^2(dt)} on the
/// trapezoid rule with `nodes` samples (0 selects 8 lambda_max).
double circle_norm_ratio(const LacunarySeries& series, double r, double p, std::size_t nodes = 0);

/// 2^{p/2} for p <= 2, 2^{p-1} for p >= 2.
double triangle_constant(double p);

/// Checks I(a - b) <= c_p (I(a) + I(b)) for the tails from term N (1-based)
/// on, all three integrals on one common rule.
bool tail_triangle_check(const LacunarySeries& a, const LacunarySeries& b, double p,
                         std::size_t first_term);

/// CSV rows `lambda,re,im` (header optional).
LacunarySeries read_series_csv(std::istream& in);

/// {p, A, criterion, direct, ratio, integrable}
std::string lacunary_json(double p, const LacunarySeries& series, double criterion,
                          double direct);

}  // namespace pbergman
