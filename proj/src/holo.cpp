#include "pbergman/holo.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pbergman {

complex integer_power(complex z, long long n) {
  if (n < 0) {
    if (z == complex{}) throw std::domain_error("pole evaluated at z = 0");
    return 1.0 / integer_power(z, -n);
  }
  complex result{1.0, 0.0};
  complex base = z;
  auto e = static_cast<unsigned long long>(n);
  while (e != 0) {
    if (e & 1ULL) result *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return result;
}

std::vector<int> admissible_exponents(const Domain& domain, double p, int n_min,
                                      int n_max) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (n_min > n_max) throw std::invalid_argument("need n_min <= n_max");
  std::vector<int> out;
  for (int n = n_min; n <= n_max; ++n) {
    bool ok = false;
    switch (domain.kind()) {
      case DomainKind::disk:
        ok = n >= 0;
        break;
      case DomainKind::punctured_disk:
        // integral of r^(np) r dr near 0 is finite iff np + 2 > 0; np = -2
        // diverges logarithmically and is excluded.
        ok = n >= 0 || static_cast<double>(n) * p + 2.0 > 0.0;
        break;
      case DomainKind::annulus:
        ok = true;
        break;
    }
    if (ok) out.push_back(n);
  }
  return out;
}

BasisSpec::BasisSpec(Domain domain, double p, std::vector<int> exponents)
    : domain_(domain), p_(p), exponents_(std::move(exponents)) {
  if (!(p > 0.0)) throw std::invalid_argument("p must be positive");
  if (exponents_.empty()) throw std::invalid_argument("basis must not be empty");
  for (std::size_t k = 1; k < exponents_.size(); ++k) {
    if (exponents_[k] <= exponents_[k - 1]) {
      throw std::invalid_argument("basis exponents must be strictly increasing");
    }
  }
  const auto ok = admissible_exponents(domain_, p_, exponents_.front(), exponents_.back());
  for (int n : exponents_) {
    if (!std::binary_search(ok.begin(), ok.end(), n)) {
      throw std::invalid_argument("exponent " + std::to_string(n) +
                                  " is not admissible for " + domain_.to_string());
    }
  }
}

BasisSpec BasisSpec::admissible(const Domain& domain, double p, int n_min,
                                int n_max) {
  return BasisSpec(domain, p, admissible_exponents(domain, p, n_min, n_max));
}

Eigen::RowVectorXcd BasisSpec::evaluation_row(complex z) const {
  Eigen::RowVectorXcd row(static_cast<Eigen::Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) {
    row(static_cast<Eigen::Index>(k)) = integer_power(z, exponents_[k]);
  }
  return row;
}

Eigen::RowVectorXcd BasisSpec::derivative_row(complex z) const {
  Eigen::RowVectorXcd row(static_cast<Eigen::Index>(size()));
  for (std::size_t k = 0; k < size(); ++k) {
    const int n = exponents_[k];
    row(static_cast<Eigen::Index>(k)) =
        n == 0 ? complex{} : static_cast<double>(n) * integer_power(z, n - 1);
  }
  return row;
}

Eigen::MatrixXcd BasisSpec::design_matrix(std::span<const complex> nodes) const {
  const auto rows = static_cast<Eigen::Index>(nodes.size());
  const auto cols = static_cast<Eigen::Index>(size());
  Eigen::MatrixXcd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const complex z = nodes[static_cast<std::size_t>(i)];
    complex power = integer_power(z, exponents_.front());
    int current = exponents_.front();
    for (Eigen::Index k = 0; k < cols; ++k) {
      const int n = exponents_[static_cast<std::size_t>(k)];
      while (current < n) {
        power *= z;
        ++current;
      }
      a(i, k) = power;
    }
  }
  return a;
}

namespace {

void check_pole(const CoeffVector& coeffs, complex z) {
  if (coeffs.coefficients.size() != static_cast<Eigen::Index>(coeffs.exponents.size())) {
    throw std::invalid_argument("coefficient vector is not aligned with its exponents");
  }
  if (z == complex{}) {
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      if (coeffs.exponents[k] < 0 && coeffs.coefficients(static_cast<Eigen::Index>(k)) != complex{}) {
        throw std::domain_error("series with a pole term evaluated at z = 0");
      }
    }
  }
}

}  // namespace

complex evaluate(const CoeffVector& coeffs, complex z) {
  check_pole(coeffs, z);
  complex sum{};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const complex a = coeffs.coefficients(static_cast<Eigen::Index>(k));
    if (a == complex{}) continue;
    sum += a * integer_power(z, coeffs.exponents[k]);
  }
  return sum;
}

complex derivative_at(const CoeffVector& coeffs, complex z) {
  check_pole(coeffs, z);
  complex sum{};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const int n = coeffs.exponents[k];
    const complex a = coeffs.coefficients(static_cast<Eigen::Index>(k));
    if (n == 0 || a == complex{}) continue;
    sum += static_cast<double>(n) * a * integer_power(z, n - 1);
  }
  return sum;
}

std::vector<complex> evaluate_on(const CoeffVector& coeffs,
                                 std::span<const complex> nodes) {
  std::vector<complex> out;
  out.reserve(nodes.size());
  for (complex z : nodes) out.push_back(evaluate(coeffs, z));
  return out;
}

void write_coeff_csv(std::ostream& out, const CoeffVector& coeffs) {
  out << "exponent,re,im\n";
  char buf[96];
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const complex a = coeffs.coefficients(static_cast<Eigen::Index>(k));
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", coeffs.exponents[k], a.real(),
                  a.imag());
    out << buf;
  }
}

CoeffVector read_coeff_csv(std::istream& in) {
  std::vector<int> exponents;
  std::vector<complex> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("exponent", 0) == 0) continue;
    std::istringstream row(line);
    std::string n_text;
    std::string re_text;
    std::string im_text;
    if (!std::getline(row, n_text, ',') || !std::getline(row, re_text, ',') ||
        !std::getline(row, im_text)) {
      throw std::invalid_argument("malformed coefficient row '" + line + "'");
    }
    exponents.push_back(std::stoi(n_text));
    values.emplace_back(std::stod(re_text), std::stod(im_text));
  }
  CoeffVector out;
  out.exponents = std::move(exponents);
  out.coefficients = Eigen::Map<Eigen::VectorXcd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
  return out;
}

}  // namespace pbergman
