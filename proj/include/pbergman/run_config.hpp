#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbergman/analysis.hpp"
#include "pbergman/geometry.hpp"
#include "pbergman/kernel.hpp"

namespace pbergman {

/// Fully resolved settings of one CLI run.  Serializes to a JSON object and
/// parses back to an identical value.
struct RunConfig {
  std::string command;
  std::string domain = "disk:1";
  std::vector<double> p{2.0};
  std::vector<complex> z{complex{}};
  complex w{0.4, 0.0};
  complex z_prime{0.2, 0.0};
  complex direction{1.0, 0.0};
  int degree = 16;
  int n_min = 0;
  int radial = 64;
  int angular = 128;
  double margin = 0.05;
  double tolerance = 1e-13;
  int max_iterations = 400;
  std::uint64_t seed = 0;
  int restarts = 8;
  int jobs = 1;
  double fd_step = 1e-2;
  std::vector<double> radii{0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  int directions = 8;
  std::string series_file;
  int lacunary_radial = 256;
  int lacunary_angular = 0;  // 0: 8 * lambda_max
  std::string output;

  KernelSettings kernel_settings() const;
  AnalysisOptions analysis_options() const;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace pbergman
