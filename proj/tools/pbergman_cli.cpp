// pbergman: seeded command-line front end for the p-Bergman experiments.
//
// Exit status: 0 converged, 2 numerically degraded (output still written),
// 1 usage or precondition error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbergman/analysis.hpp"
#include "pbergman/format.hpp"
#include "pbergman/kernel.hpp"
#include "pbergman/lacunary.hpp"
#include "pbergman/run_config.hpp"

namespace {

using namespace pbergman;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDegraded = 2;

struct Emitter {
  std::ofstream file;
  std::ostream* out = &std::cout;

  Emitter(const RunConfig& config, const std::string& extension) {
    std::string path = config.output;
    if (path.empty()) {
      if (const char* dir = std::getenv("PBERGMAN_OUTPUT_DIR"); dir && *dir) {
        path = (std::filesystem::path(dir) / (config.command + extension)).string();
      }
    }
    if (!path.empty()) {
      file.open(path);
      if (!file) throw std::invalid_argument("cannot open output file '" + path + "'");
      out = &file;
    }
  }
};

void csv_preamble(std::ostream& out, const RunConfig& config) {
  out << "# config " << config.to_json() << '\n';
}

nlohmann::ordered_json with_config(const std::string& body, const RunConfig& config) {
  auto j = nlohmann::ordered_json::parse(body);
  j["config"] = nlohmann::ordered_json::parse(config.to_json());
  return j;
}

int run_kernel(const RunConfig& config) {
  const KernelEngine engine(config.kernel_settings());
  const std::size_t nz = config.z.size();
  std::vector<KernelResult> found(config.p.size() * nz);
  parallel_for(found.size(), config.jobs, [&](std::size_t i) {
    found[i] = engine.mp_minimizer(config.p[i / nz], config.z[i % nz]);
  });
  Emitter emit(config, ".json");
  auto results = nlohmann::ordered_json::array();
  bool converged = true;
  for (const auto& r : found) {
    converged = converged && r.minimizer.converged;
    results.push_back(with_config(kernel_json(r), config));
  }
  *emit.out << (results.size() == 1 ? results.front() : results).dump(2) << '\n';
  return converged ? kOk : kDegraded;
}

int run_metric(const RunConfig& config) {
  const KernelEngine engine(config.kernel_settings());
  const std::size_t nz = config.z.size();
  std::vector<SweepRow> rows(config.p.size() * nz);
  std::vector<char> converged(rows.size());
  parallel_for(rows.size(), config.jobs, [&](std::size_t i) {
    const double p = config.p[i / nz];
    const complex z = config.z[i % nz];
    const KernelResult k = engine.mp_minimizer(p, z);
    const MetricResult m = engine.metric_at(p, z, config.direction);
    converged[i] = k.minimizer.converged && m.extremal.converged;
    rows[i] = {p, z, k.K_p, m.B_p};
  });
  Emitter emit(config, ".csv");
  csv_preamble(*emit.out, config);
  write_sweep_csv(*emit.out, rows);
  return std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; }) ? kOk
                                                                                       : kDegraded;
}

int run_levi(const RunConfig& config) {
  const KernelEngine engine(config.kernel_settings());
  std::vector<LeviRecord> rows;
  int status = kOk;
  for (double p : config.p) {
    try {
      rows.push_back(levi_comparison(engine, p, config.direction, config.analysis_options()));
    } catch (const NumericalError& e) {
      std::cerr << "levi: p=" << p << ": " << e.what() << '\n';
      status = kDegraded;
    }
  }
  Emitter emit(config, ".csv");
  csv_preamble(*emit.out, config);
  write_levi_csv(*emit.out, rows);
  return status;
}

int run_holder(const RunConfig& config, bool hp) {
  const KernelEngine engine(config.kernel_settings());
  Emitter emit(config, ".csv");
  csv_preamble(*emit.out, config);
  int status = kOk;
  for (double p : config.p) {
    try {
      const HolderFit fit =
          hp ? hp_scaling_exponent(engine, p, config.w, config.radii, config.analysis_options())
             : holder_exponent(engine, p, config.z_prime, config.w, config.radii,
                               config.analysis_options());
      *emit.out << "# p " << format_double(p) << " slope " << format_double(fit.slope)
                << " intercept " << format_double(fit.intercept) << " r_squared "
                << format_double(fit.r_squared) << '\n';
      write_holder_csv(*emit.out, fit);
    } catch (const DegenerateFitError& e) {
      std::cerr << "holder: p=" << p << ": " << e.what() << '\n';
      status = kDegraded;
    }
  }
  return status;
}

int run_limit(const RunConfig& config) {
  const KernelEngine engine(config.kernel_settings());
  const LimitRecord rec = limit_sweep(engine, config.z.front(), config.p, config.analysis_options());
  Emitter emit(config, ".csv");
  csv_preamble(*emit.out, config);
  *emit.out << "# d_p bound: lower\n";
  write_limit_csv(*emit.out, rec);
  int status = kOk;
  for (const auto& row : rec.rows) {
    if (!row.ok) {
      std::cerr << "limit: p=" << row.p << ": " << row.status << '\n';
      status = kDegraded;
    }
  }
  return status;
}

int run_lacunary(const RunConfig& config) {
  std::ifstream in(config.series_file);
  if (!in) throw std::invalid_argument("cannot read series file '" + config.series_file + "'");
  const LacunarySeries series = read_series_csv(in);
  std::size_t angular = config.lacunary_angular > 0
                            ? static_cast<std::size_t>(config.lacunary_angular)
                            : static_cast<std::size_t>(8 * series.max_lambda());
  angular = std::max<std::size_t>(angular, 16);
  const QuadratureGrid grid(Domain::disk(1.0), static_cast<std::size_t>(config.lacunary_radial),
                            angular);
  Emitter emit(config, ".json");
  auto results = nlohmann::ordered_json::array();
  for (double p : config.p) {
    const double criterion = criterion_integral(series, p);
    const double direct = direct_lp(series, p, grid);
    results.push_back(with_config(lacunary_json(p, series, criterion, direct), config));
  }
  *emit.out << (results.size() == 1 ? results.front() : results).dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical p-Bergman kernels, metrics and lacunary L^p criteria"};
  app.require_subcommand(1);

  RunConfig config;
  std::string p_text;
  std::string z_text;
  std::string w_text;
  std::string zprime_text;
  std::string dir_text;
  std::string radii_text;

  std::map<std::string, std::string> default_p;
  auto common = [&](CLI::App* sub, const std::string& p_default) {
    default_p[sub->get_name()] = p_default;
    sub->add_option("--domain", config.domain, "disk:R | annulus:r0,r1 | punctured:R")
        ->capture_default_str();
    sub->add_option("--p", p_text, "exponent p, or comma-separated list (default " + p_default + ")");
    sub->add_option("--degree", config.degree, "highest basis exponent")->capture_default_str();
    sub->add_option("--nmin", config.n_min, "lowest basis exponent (negative admits poles)")
        ->capture_default_str();
    sub->add_option("--radial", config.radial, "radial Gauss-Legendre nodes")->capture_default_str();
    sub->add_option("--angular", config.angular, "angular trapezoid nodes")->capture_default_str();
    sub->add_option("--margin", config.margin, "boundary margin as a fraction of the outer radius")
        ->capture_default_str();
    sub->add_option("--tol", config.tolerance, "relative objective change ending a stage")
        ->capture_default_str();
    sub->add_option("--max-iterations", config.max_iterations, "IRLS iterations per stage")
        ->capture_default_str();
    sub->add_option("--seed", config.seed, "multistart seed")->capture_default_str();
    sub->add_option("--restarts", config.restarts, "multistart restarts")->capture_default_str();
    sub->add_option("--jobs", config.jobs, "worker threads")->capture_default_str();
    sub->add_option("--output,-o", config.output,
                    "output file (default: $PBERGMAN_OUTPUT_DIR/<command>.<ext>, else stdout)");
  };

  auto* kernel = app.add_subcommand("kernel", "m_p(z), K_p(z) and solver diagnostics (JSON)");
  common(kernel, "2");
  z_text = "0";
  kernel->add_option("--z", z_text, "point, e.g. 0.3+0.4i, or ';'-separated list")
      ->capture_default_str();

  auto* metric = app.add_subcommand("metric", "K_p and B_p over p and z (CSV)");
  common(metric, "2");
  metric->add_option("--z", z_text, "point or ';'-separated list")->capture_default_str();
  dir_text = "1";
  metric->add_option("--direction", dir_text, "tangent direction X")->capture_default_str();

  auto* levi = app.add_subcommand("levi", "Levi form of log K_p against B_p^2 at 0 (CSV)");
  common(levi, "2");
  levi->add_option("--direction", dir_text, "tangent direction X")->capture_default_str();
  levi->add_option("--fd-step", config.fd_step, "finite-difference step")->capture_default_str();

  bool hp = false;
  auto* holder = app.add_subcommand("holder", "Hoelder exponent of m_p(z', .) (CSV)");
  common(holder, "2");
  w_text = "0.4";
  zprime_text = "0.2";
  radii_text = "0.1,0.05,0.025,0.0125,0.00625,0.003125";
  holder->add_option("--w", w_text, "base point")->capture_default_str();
  holder->add_option("--zprime", zprime_text, "evaluation point z'")->capture_default_str();
  holder->add_option("--radii", radii_text, "decreasing probe radii")->capture_default_str();
  holder->add_option("--directions", config.directions, "probe directions")->capture_default_str();
  holder->add_flag("--hp", hp, "fit H_p(w, w + r e^{i phi}) instead");

  auto* limit = app.add_subcommand("limit", "K_p and multistart d_p as p -> 1- (CSV)");
  common(limit, "0.7,0.8,0.9,0.95,0.99");
  limit->add_option("--z", z_text, "point")->capture_default_str();

  auto* lacunary = app.add_subcommand("lacunary", "lacunary L^p criterion vs direct integral (JSON)");
  common(lacunary, "2");
  lacunary->add_option("--file", config.series_file, "CSV rows lambda,re,im")->required();
  lacunary->add_option("--lac-radial", config.lacunary_radial, "radial nodes of the disk grid")
      ->capture_default_str();
  lacunary->add_option("--lac-angular", config.lacunary_angular,
                       "angular nodes (0: 8 * lambda_max)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    config.command = sub->get_name();
    config.p = parse_list(p_text.empty() ? default_p.at(config.command) : p_text);
    config.z.clear();
    std::stringstream zs(z_text);
    for (std::string item; std::getline(zs, item, ';');) config.z.push_back(parse_complex(item));
    if (config.z.empty()) config.z.push_back(complex{});
    config.direction = parse_complex(dir_text);
    config.w = parse_complex(w_text);
    config.z_prime = parse_complex(zprime_text);
    config.radii = parse_list(radii_text);

    if (config.command == "kernel") return run_kernel(config);
    if (config.command == "metric") return run_metric(config);
    if (config.command == "levi") return run_levi(config);
    if (config.command == "holder") return run_holder(config, hp);
    if (config.command == "limit") return run_limit(config);
    if (config.command == "lacunary") return run_lacunary(config);
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDegraded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
