#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pbergman/geometry.hpp"

namespace pbergman {

/// z^n for integer n by repeated squaring.
complex integer_power(complex z, long long n);

/// Exponents n in [n_min, n_max] with z^n holomorphic on the domain and in
/// L^p: n >= 0 on the disk, n*p + 2 > 0 on the punctured disk, everything on
/// an annulus.
std::vector<int> admissible_exponents(const Domain& domain, double p, int n_min,
                                      int n_max);

/// A finite Laurent basis {z^n : n in exponents} admissible for A^p(domain).
class BasisSpec {
 public:
  BasisSpec(Domain domain, double p, std::vector<int> exponents);

  /// All admissible exponents in [n_min, n_max].
  static BasisSpec admissible(const Domain& domain, double p, int n_min,
                              int n_max);

  const Domain& domain() const noexcept { return domain_; }
  double p() const noexcept { return p_; }
  std::span<const int> exponents() const noexcept { return exponents_; }
  std::size_t size() const noexcept { return exponents_.size(); }
  bool has_poles() const noexcept { return !exponents_.empty() && exponents_.front() < 0; }

  /// Row r with r * c = sum_n c_n z^n.
  Eigen::RowVectorXcd evaluation_row(complex z) const;
  /// Row r with r * c = sum_n n c_n z^(n-1).
  Eigen::RowVectorXcd derivative_row(complex z) const;
  /// Matrix with entry (i, k) = node_i^(exponent_k).
  Eigen::MatrixXcd design_matrix(std::span<const complex> nodes) const;

 private:
  Domain domain_;
  double p_;
  std::vector<int> exponents_;
};

/// Coefficients of a truncated Laurent series, one per exponent.
struct CoeffVector {
  std::vector<int> exponents;
  Eigen::VectorXcd coefficients;

  std::size_t size() const noexcept { return exponents.size(); }
};

complex evaluate(const CoeffVector& coeffs, complex z);
complex derivative_at(const CoeffVector& coeffs, complex z);

/// Values at every grid node.
std::vector<complex> evaluate_on(const CoeffVector& coeffs,
                                 std::span<const complex> nodes);

/// CSV rows `exponent,re,im` preceded by that header line.
void write_coeff_csv(std::ostream& out, const CoeffVector& coeffs);
CoeffVector read_coeff_csv(std::istream& in);

}  // namespace pbergman
