#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pbergman {

using complex = std::complex<double>;

enum class DomainKind { disk, annulus, punctured_disk };

/// Planar circular domain {inner < |z| < outer}.  The disk and the punctured
/// disk share the same measure; they differ only in which Laurent exponents
/// are admissible (see holo.hpp).
class Domain {
 public:
  static Domain disk(double radius);
  static Domain punctured_disk(double radius);
  static Domain annulus(double inner, double outer);

  /// Parses `disk:R`, `annulus:r0,r1` or `punctured:R`.
  static Domain parse(std::string_view text);

  DomainKind kind() const noexcept { return kind_; }
  double outer_radius() const noexcept { return outer_; }
  double inner_radius() const noexcept { return inner_; }
  double area() const noexcept;

  /// Inverse of parse(), 17 significant digits.
  std::string to_string() const;

  bool contains(complex z) const noexcept;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  Domain(DomainKind kind, double inner, double outer);

  DomainKind kind_;
  double inner_;
  double outer_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t count);

/// Tensor-product polar rule: Gauss-Legendre in radius (Jacobian folded into
/// the weights) times the uniform trapezoid rule in angle.  Node layout is
/// ring-major: node(i * angular_count + j) = radius(i) * exp(2 pi i j / M).
class QuadratureGrid {
 public:
  QuadratureGrid(const Domain& domain, std::size_t radial_count,
                 std::size_t angular_count);

  const Domain& domain() const noexcept { return domain_; }
  std::size_t radial_count() const noexcept { return radii_.size(); }
  std::size_t angular_count() const noexcept { return angular_count_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::span<const complex> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> radii() const noexcept { return radii_; }
  /// Per-ring weight of a single node (radial weight * r * 2 pi / M).
  std::span<const double> ring_weights() const noexcept { return ring_weights_; }

  double total_weight() const noexcept;

 private:
  Domain domain_;
  std::size_t angular_count_;
  std::vector<double> radii_;
  std::vector<double> ring_weights_;
  std::vector<complex> nodes_;
  std::vector<double> weights_;
};

QuadratureGrid build_grid(const Domain& domain, std::size_t radial_count,
                          std::size_t angular_count);

/// (sum_i w_i |v_i|^p)^(1/p)
double lp_norm(const QuadratureGrid& grid, std::span<const complex> values,
               double p);

/// sum_i w_i |v_i|^p, the p-th power of lp_norm without the root.
double lp_integral(const QuadratureGrid& grid, std::span<const complex> values,
                   double p);

}  // namespace pbergman
