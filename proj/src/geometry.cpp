#include "pbergman/geometry.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace pbergman {

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  }
  return value;
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Domain::Domain(DomainKind kind, double inner, double outer)
    : kind_(kind), inner_(inner), outer_(outer) {
  if (!(std::isfinite(outer) && std::isfinite(inner))) {
    throw std::invalid_argument("domain radii must be finite");
  }
  if (!(inner >= 0.0) || !(outer > inner)) {
    throw std::invalid_argument("degenerate domain: need outer > inner >= 0");
  }
}

Domain Domain::disk(double radius) {
  return Domain(DomainKind::disk, 0.0, radius);
}

Domain Domain::punctured_disk(double radius) {
  return Domain(DomainKind::punctured_disk, 0.0, radius);
}

Domain Domain::annulus(double inner, double outer) {
  if (!(inner > 0.0)) {
    throw std::invalid_argument("annulus needs a positive inner radius");
  }
  return Domain(DomainKind::annulus, inner, outer);
}

Domain Domain::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("domain spec must look like kind:params, got '" +
                                std::string(text) + "'");
  }
  const auto kind = text.substr(0, colon);
  const auto args = text.substr(colon + 1);
  if (kind == "disk") return disk(parse_number(args));
  if (kind == "punctured") return punctured_disk(parse_number(args));
  if (kind == "annulus") {
    const auto comma = args.find(',');
    if (comma == std::string_view::npos) {
      throw std::invalid_argument("annulus spec must be annulus:r0,r1");
    }
    return annulus(parse_number(args.substr(0, comma)),
                   parse_number(args.substr(comma + 1)));
  }
  throw std::invalid_argument("unknown domain kind '" + std::string(kind) + "'");
}

double Domain::area() const noexcept {
  return std::numbers::pi * (outer_ * outer_ - inner_ * inner_);
}

std::string Domain::to_string() const {
  switch (kind_) {
    case DomainKind::disk:
      return "disk:" + format17(outer_);
    case DomainKind::punctured_disk:
      return "punctured:" + format17(outer_);
    case DomainKind::annulus:
      return "annulus:" + format17(inner_) + "," + format17(outer_);
  }
  return {};
}

bool Domain::contains(complex z) const noexcept {
  const double r = std::abs(z);
  if (r >= outer_) return false;
  if (kind_ == DomainKind::disk) return true;
  return r > inner_;
}

GaussLegendreRule gauss_legendre(std::size_t count) {
  if (count == 0) throw std::invalid_argument("Gauss-Legendre needs >= 1 node");
  GaussLegendreRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const auto n = static_cast<double>(count);
  for (std::size_t i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= count; ++k) {
        const auto kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= count; ++k) {
      const auto kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    if (count == 1) {
      dp = 1.0;
    } else {
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

QuadratureGrid::QuadratureGrid(const Domain& domain, std::size_t radial_count,
                               std::size_t angular_count)
    : domain_(domain), angular_count_(angular_count) {
  if (radial_count < 2) throw std::invalid_argument("radial_count must be >= 2");
  if (angular_count < 4) throw std::invalid_argument("angular_count must be >= 4");

  const auto rule = gauss_legendre(radial_count);
  const double a = domain.inner_radius();
  const double b = domain.outer_radius();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(angular_count);

  radii_.resize(radial_count);
  ring_weights_.resize(radial_count);
  for (std::size_t i = 0; i < radial_count; ++i) {
    radii_[i] = mid + half * rule.nodes[i];
    ring_weights_[i] = half * rule.weights[i] * radii_[i] * dtheta;
  }

  std::vector<complex> unit(angular_count);
  for (std::size_t j = 0; j < angular_count; ++j) {
    unit[j] = std::polar(1.0, dtheta * static_cast<double>(j));
  }

  nodes_.reserve(radial_count * angular_count);
  weights_.reserve(radial_count * angular_count);
  for (std::size_t i = 0; i < radial_count; ++i) {
    for (std::size_t j = 0; j < angular_count; ++j) {
      nodes_.push_back(radii_[i] * unit[j]);
      weights_.push_back(ring_weights_[i]);
    }
  }
}

double QuadratureGrid::total_weight() const noexcept {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

QuadratureGrid build_grid(const Domain& domain, std::size_t radial_count,
                          std::size_t angular_count) {
  return QuadratureGrid(domain, radial_count, angular_count);
}

double lp_integral(const QuadratureGrid& grid, std::span<const complex> values,
                   double p) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (values.size() != grid.size()) {
    throw std::invalid_argument("values are not aligned with the grid nodes");
  }
  const auto weights = grid.weights();
  double sum = 0.0;
  if (p == 2.0) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum += weights[i] * std::norm(values[i]);
    }
  } else {
    const double half_p = 0.5 * p;
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum += weights[i] * std::pow(std::norm(values[i]), half_p);
    }
  }
  return sum;
}

double lp_norm(const QuadratureGrid& grid, std::span<const complex> values,
               double p) {
  return std::pow(lp_integral(grid, values, p), 1.0 / p);
}

}  // namespace pbergman
