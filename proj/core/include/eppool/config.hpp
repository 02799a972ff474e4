#ifndef EPPOOL_CONFIG_HPP
#define EPPOOL_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eppool/dynamics.hpp"
#include "eppool/evaluation.hpp"
#include "eppool/imis.hpp"
#include "eppool/likelihood.hpp"
#include "eppool/priors.hpp"

namespace eppool {

struct AreaConfig {
  std::string id;
  std::string anc_path;
  std::string npbs_path;
  std::string demography_path;
  double initial_population = 1e6;
  std::optional<std::string> ensemble_path;  // for pool/evaluate inputs
};

struct PoolingConfig {
  std::array<double, ParamVector::dim> lambda = HierPriorConfig::default_lambda();
  int n_candidates = 1000000;
  int n_draws = 3000;
  double ess_warning = 500.0;
  std::vector<int> correlation_years;
};

/// One structured run config (JSON) naming areas, file paths, the year
/// range, and sampler settings; all randomness flows from the named seed.
struct RunConfig {
  std::vector<AreaConfig> areas;
  int year_start = 1970;
  int year_end = 2015;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  LikelihoodConfig likelihood;
  ProjectionConfig projection;
  IndependentPrior prior;
  ImisConfig imis;
  PoolingConfig pooling;
  SimulationConfig simulation;
  ParamVector simulation_truth;
  int scenario_candidates = 100000;
  int scenario_eval_draws = 1000;
};

RunConfig load_run_config(const std::string& path);

}  // namespace eppool

#endif
