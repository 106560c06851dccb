#include "pbergman/run_config.hpp"

#include "json.hpp"
#include "pbergman/format.hpp"

namespace pbergman {

KernelSettings RunConfig::kernel_settings() const {
  KernelSettings s;
  s.domain = Domain::parse(domain);
  s.degree = degree;
  s.n_min = n_min;
  s.radial_count = static_cast<std::size_t>(radial);
  s.angular_count = static_cast<std::size_t>(angular);
  s.margin = margin;
  s.solver.tolerance = tolerance;
  s.solver.max_iterations = max_iterations;
  s.solver.restarts = restarts;
  s.solver.rng_seed = seed;
  return s;
}

AnalysisOptions RunConfig::analysis_options() const {
  AnalysisOptions o;
  o.fd_step = fd_step;
  o.directions = directions;
  o.jobs = jobs;
  return o;
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["domain"] = domain;
  j["p"] = p;
  auto zs = nlohmann::ordered_json::array();
  for (complex v : z) zs.push_back(format_complex(v));
  j["z"] = zs;
  j["w"] = format_complex(w);
  j["z_prime"] = format_complex(z_prime);
  j["direction"] = format_complex(direction);
  j["degree"] = degree;
  j["nmin"] = n_min;
  j["radial"] = radial;
  j["angular"] = angular;
  j["margin"] = margin;
  j["tolerance"] = tolerance;
  j["max_iterations"] = max_iterations;
  j["seed"] = seed;
  j["restarts"] = restarts;
  j["jobs"] = jobs;
  j["fd_step"] = fd_step;
  j["radii"] = radii;
  j["directions"] = directions;
  j["series_file"] = series_file;
  j["lacunary_radial"] = lacunary_radial;
  j["lacunary_angular"] = lacunary_angular;
  j["output"] = output;
  return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.domain = j.at("domain").get<std::string>();
  c.p = j.at("p").get<std::vector<double>>();
  c.z.clear();
  for (const auto& v : j.at("z")) c.z.push_back(parse_complex(v.get<std::string>()));
  c.w = parse_complex(j.at("w").get<std::string>());
  c.z_prime = parse_complex(j.at("z_prime").get<std::string>());
  c.direction = parse_complex(j.at("direction").get<std::string>());
  c.degree = j.at("degree").get<int>();
  c.n_min = j.at("nmin").get<int>();
  c.radial = j.at("radial").get<int>();
  c.angular = j.at("angular").get<int>();
  c.margin = j.at("margin").get<double>();
  c.tolerance = j.at("tolerance").get<double>();
  c.max_iterations = j.at("max_iterations").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.restarts = j.at("restarts").get<int>();
  c.jobs = j.at("jobs").get<int>();
  c.fd_step = j.at("fd_step").get<double>();
  c.radii = j.at("radii").get<std::vector<double>>();
  c.directions = j.at("directions").get<int>();
  c.series_file = j.at("series_file").get<std::string>();
  c.lacunary_radial = j.at("lacunary_radial").get<int>();
  c.lacunary_angular = j.at("lacunary_angular").get<int>();
  c.output = j.at("output").get<std::string>();
  return c;
}

}  // namespace pbergman
