#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pbergman/analysis.hpp"

using namespace pbergman;
using oracle::pi;

namespace {

const KernelEngine& engine16() {
  static const KernelEngine e([] {
    KernelSettings s;
    s.degree = 16;
    return s;
  }());
  return e;
}

std::vector<double> halving_radii(double start, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k) r.push_back(start * std::pow(0.5, k));
  return r;
}

}  // namespace

TEST_CASE("levi form of the closed-form log kernel") {
  auto log_k = [](complex z) { return std::log(oracle::disk_kp(z)); };
  for (complex z : {complex(0.0), complex(0.5), complex(-0.3, 0.6)}) {
    for (complex x : {complex(1.0), complex(0.0, 1.0), complex(0.6, 0.8)}) {
      CHECK(std::abs(levi_form(log_k, z, x, 1e-2) - oracle::disk_levi(z)) < 1e-6);
    }
  }
  // The Levi form is quadratic in |X|.
  CHECK(levi_form(log_k, 0.2, 2.0, 5e-3) == doctest::Approx(4 * oracle::disk_levi(0.2)).epsilon(1e-6));
  // Pluriharmonic functions have zero Levi form.
  auto harmonic = [](complex z) { return std::real(z * z * z) - std::imag(z); };
  CHECK(std::abs(levi_form(harmonic, {0.1, 0.2}, 1.0, 1e-2)) < 1e-9);
  CHECK_THROWS_AS(levi_form(log_k, 0.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(levi_form(log_k, 0.0, 0.0, 1e-2), std::invalid_argument);
}

TEST_CASE("levi form of the computed kernel") {
  const auto& e = engine16();
  CHECK(std::abs(levi_form_log_kp(e, 2.0, 0.0, 1.0) - 2.0) < 1e-3);
  CHECK(std::abs(levi_form_log_kp(e, 4.0, 0.0, 1.0) - 2.0) < 1e-3);
  CHECK(std::abs(levi_form_log_kp(e, 2.0, 0.5, 1.0) - 2 / 0.5625) < 5e-3);
  CHECK_THROWS_AS(levi_form_log_kp(e, 2.0, 0.935, 1.0), MarginError);
}

TEST_CASE("levi_comparison gap signs") {
  const auto& e = engine16();
  const LeviRecord r4 = levi_comparison(e, 4.0, 1.0);
  CHECK(r4.gap == doctest::Approx(2 - std::sqrt(3.0)).epsilon(1e-3));
  CHECK(r4.gap == r4.levi - r4.b_p_squared);
  CHECK(r4.fd_step == AnalysisOptions{}.fd_step);
  CHECK(std::abs(levi_comparison(e, 2.0, 1.0).gap) <= 2e-3);
  CHECK(levi_comparison(e, 1.0, 1.0).gap == doctest::Approx(-0.25).epsilon(1e-3));
  for (double p : {3.0, 4.0}) CHECK(levi_comparison(e, p, 1.0).gap > 0.0);
  for (double p : {1.0, 1.5}) CHECK(levi_comparison(e, p, 1.0).gap < 0.0);

  KernelSettings ann;
  ann.domain = Domain::annulus(0.5, 1.0);
  CHECK_THROWS_AS(levi_comparison(KernelEngine(ann), 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("log-log fit recovers synthetic exponents") {
  const auto radii = halving_radii(0.1, 6);
  for (double alpha : {0.5, 1.0, 2.0}) {
    std::vector<double> d;
    for (double r : radii) d.push_back(3.7 * std::pow(r, alpha));
    const HolderFit fit = fit_loglog(radii, d);
    CHECK(std::abs(fit.slope - alpha) < 1e-6);
    CHECK(std::abs(std::exp(fit.intercept) - 3.7) < 1e-6);
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.points_used == radii.size());
  }
}

TEST_CASE("degenerate fits are reported") {
  CHECK_THROWS_AS(fit_loglog({0.1}, {0.2}), DegenerateFitError);
  CHECK_THROWS_AS(fit_loglog({0.1, 0.05, 0.01}, {0.0, 0.0, 0.0}), DegenerateFitError);
  CHECK_THROWS_AS(fit_loglog({0.1, 0.05, 0.01}, {1e-3, 1e-12, 1e-13}), DegenerateFitError);
  CHECK_THROWS_AS(fit_loglog({0.1, 0.05}, {1.0}), std::invalid_argument);
  // Points under the noise floor are dropped, not fitted.
  const HolderFit f = fit_loglog({0.1, 0.05, 0.025, 0.0125}, {0.1, 0.05, 0.025, 1e-12});
  CHECK(f.points_used == 3);
  CHECK(f.slope == doctest::Approx(1.0));
  CHECK_THROWS_AS(holder_exponent(engine16(), 2.0, 0.2, 0.4, {0.1}), DegenerateFitError);
}

TEST_CASE("hoelder exponents of the minimizer") {
  const auto& e = engine16();
  const auto radii = halving_radii(0.1, 6);
  const HolderFit f2 = holder_exponent(e, 2.0, 0.2, 0.4, radii);
  CHECK(std::abs(f2.slope - 1.0) < 0.1);
  CHECK(f2.radii == radii);
  CHECK(f2.deltas.size() == radii.size());
  CHECK(holder_exponent(e, 3.0, 0.2, 0.4, radii).slope >= 0.9);
  CHECK_THROWS_AS(holder_exponent(e, 1.0, 0.2, 0.4, radii), std::invalid_argument);
  CHECK_THROWS_AS(holder_exponent(e, 2.0, 0.2, 0.4, {0.1, 0.05}), std::invalid_argument);
}

TEST_CASE("hoelder deltas match the closed form at p = 2") {
  const auto& e = engine16();
  const std::vector<double> radii{0.1, 0.01, 0.001};
  const HolderFit f = holder_exponent(e, 2.0, 0.2, 0.4, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double want = 0.0;
    for (int k = 0; k < 8; ++k) {
      const complex z = 0.4 + std::polar(radii[i], 2 * pi * k / 8);
      want = std::max(want, std::abs(oracle::disk_mp(2.0, 0.2, z) - oracle::disk_mp(2.0, 0.2, 0.4)));
    }
    CHECK(oracle::relative_error(f.deltas[i], want) < 1e-4);
  }
}

TEST_CASE("H_p scaling") {
  const auto& e = engine16();
  const auto radii = halving_radii(0.1, 6);
  CHECK(std::abs(hp_scaling_exponent(e, 2.0, 0.3, radii).slope - 2.0) < 0.1);
  const HolderFit f15 = hp_scaling_exponent(e, 1.5, 0.3, radii);
  MESSAGE("H_1.5 scaling slope " << f15.slope);
  CHECK(f15.slope >= 1.5);
}

TEST_CASE("dp estimates") {
  KernelSettings s;
  s.degree = 8;
  s.solver.restarts = 6;
  const KernelEngine e(s);
  const DpEstimate d99 = dp_estimate(e, 0.99, 0.0);
  CHECK(d99.d_p < 1e-3);
  CHECK(d99.K_p == doctest::Approx(1 / pi).epsilon(1e-6));
  CHECK(d99.restarts == 6);
  CHECK(d99.pairwise.size() == d99.near_optimal * (d99.near_optimal - 1) / 2);

  s.solver.restarts = 1;
  const DpEstimate single = dp_estimate(KernelEngine(s), 0.7, 0.0);
  CHECK(single.d_p == 0.0);
  CHECK(single.pairwise.empty());

  CHECK_THROWS_AS(dp_estimate(e, 1.2, 0.0), std::invalid_argument);
}

TEST_CASE("dp grows with the restart count") {
  double previous = -1.0;
  for (int restarts : {1, 2, 4, 8}) {
    KernelSettings s;
    s.degree = 8;
    s.solver.restarts = restarts;
    s.solver.rng_seed = 3;
    const double d = dp_estimate(KernelEngine(s), 0.8, {0.2, 0.1}).d_p;
    CHECK(d >= previous);
    previous = d;
  }
}

TEST_CASE("pnorm distance") {
  const auto& e = engine16();
  const auto f = e.mp_minimizer(2.0, 0.0).minimizer.coeffs;
  CHECK(pnorm_distance(e, f, f, 0.5) == 0.0);
  CoeffVector g = f;
  g.coefficients(1) = 1.0;
  CHECK(pnorm_distance(e, f, g, 1.0) == doctest::Approx(2 * pi / 3).epsilon(1e-10));
}

TEST_CASE("limit sweep") {
  KernelSettings s;
  s.degree = 8;
  s.solver.restarts = 4;
  const KernelEngine e(s);
  const LimitRecord rec = limit_sweep(e, 0.0, {0.7, 0.9, 0.99, 1.0});
  REQUIRE(rec.rows.size() == 4);
  for (const auto& row : rec.rows) {
    CHECK(row.ok);
    CHECK(row.restarts == 4);
    CHECK(row.K_p == doctest::Approx(1 / pi).epsilon(1e-6));
  }
  CHECK(rec.rows.back().d_p < 1e-6);
  CHECK(rec.rows[2].d_p <= rec.rows[0].d_p);
  CHECK_THROWS_AS(limit_sweep(e, 0.0, {0.9, 0.8}), std::invalid_argument);
  CHECK_THROWS_AS(limit_sweep(e, 0.0, {0.9, 1.1}), std::invalid_argument);
  CHECK_THROWS_AS(limit_sweep(e, 0.0, {}), std::invalid_argument);
}

TEST_CASE("parallel_for covers every index and rethrows") {
  std::vector<int> hits(50, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 7) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}
