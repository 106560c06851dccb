#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pbergman/format.hpp"
#include "pbergman/run_config.hpp"

using namespace pbergman;

TEST_CASE("run config round trip") {
  RunConfig c;
  c.command = "holder";
  c.domain = "annulus:0.25,1";
  c.p = {1.5, 2.0, 3.0 + 1e-15};
  c.z = {{0.1, -0.2}, {1.0 / 3.0, 0.0}};
  c.w = {0.4, 1e-300};
  c.direction = {0.0, -1.0};
  c.degree = 21;
  c.n_min = -3;
  c.seed = 18446744073709551615ULL;
  c.radii = {0.2, 0.02, 0.002};
  c.series_file = "data/series \"x\".csv";
  c.output = "out.csv";
  const std::string text = c.to_json();
  const RunConfig back = RunConfig::from_json(text);
  CHECK(back == c);
  CHECK(back.to_json() == text);
  CHECK(RunConfig::from_json(RunConfig{}.to_json()) == RunConfig{});
  CHECK_THROWS(RunConfig::from_json("{\"degree\": \"x\"}"));
  CHECK_THROWS(RunConfig::from_json("not json"));
}

TEST_CASE("run config feeds the engine settings") {
  RunConfig c;
  c.domain = "punctured:1";
  c.degree = 12;
  c.n_min = -1;
  c.tolerance = 1e-10;
  c.restarts = 5;
  c.seed = 9;
  const KernelSettings s = c.kernel_settings();
  CHECK(s.domain == Domain::punctured_disk(1.0));
  CHECK(s.degree == 12);
  CHECK(s.n_min == -1);
  CHECK(s.solver.tolerance == 1e-10);
  CHECK(s.solver.restarts == 5);
  CHECK(s.solver.rng_seed == 9);
  c.fd_step = 5e-3;
  c.jobs = 3;
  CHECK(c.analysis_options().fd_step == 5e-3);
  CHECK(c.analysis_options().jobs == 3);
}

TEST_CASE("doubles print with round-trip precision") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("complex parsing") {
  CHECK(parse_complex("0") == complex(0, 0));
  CHECK(parse_complex("0.5") == complex(0.5, 0));
  CHECK(parse_complex("0.3+0.4i") == complex(0.3, 0.4));
  CHECK(parse_complex("-0.3-0.4i") == complex(-0.3, -0.4));
  CHECK(parse_complex("2i") == complex(0, 2));
  CHECK(parse_complex("-i") == complex(0, -1));
  CHECK(parse_complex("1e-3+2e-2i") == complex(1e-3, 2e-2));
  CHECK(parse_complex("0.1,0.2") == complex(0.1, 0.2));
  for (complex z : {complex(1.0 / 3, -2e-17), complex(-0.7, 0.0), complex(0.0, 5.5)}) {
    CHECK(parse_complex(format_complex(z)) == z);
  }
  CHECK_THROWS_AS(parse_complex(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_complex("1+2"), std::invalid_argument);
}

TEST_CASE("number lists") {
  CHECK(parse_list("2") == std::vector<double>{2.0});
  CHECK(parse_list("0.7, 0.8,0.9") == std::vector<double>{0.7, 0.8, 0.9});
  CHECK_THROWS_AS(parse_list(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_list("1,,2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_list("1,x"), std::invalid_argument);
}

TEST_CASE("csv emitters start with their header row") {
  std::ostringstream sweep, levi, holder, limit;
  write_sweep_csv(sweep, {{2.0, {0.1, -0.2}, 0.5, 1.25}});
  CHECK(sweep.str() == "p,re_z,im_z,K_p,B_p\n2,0.10000000000000001,-0.20000000000000001,0.5,1.25\n");

  LeviRecord r;
  r.p = 4;
  r.levi = 2;
  r.b_p_squared = 1.5;
  r.gap = 0.5;
  write_levi_csv(levi, {r});
  CHECK(levi.str() == "p,z,levi,bp2,gap\n4,0+0i,2,1.5,0.5\n");

  HolderFit f;
  f.radii = {0.1, 0.05};
  f.deltas = {0.2, 0.1};
  f.slope = 1;
  f.intercept = std::log(2.0);
  write_holder_csv(holder, f);
  CHECK(holder.str().rfind("r,delta,fitted\n0.10000000000000001,0.20000000000000001,", 0) == 0);

  LimitRecord rec;
  rec.rows.push_back({0.7, 0.3, 1e-5, 16, true, "ok"});
  write_limit_csv(limit, rec);
  CHECK(limit.str() == "p,K_p,d_p,restarts,status\n0.69999999999999996,0.29999999999999999,1.0000000000000001e-05,16,ok\n");
}
