#include "eppool/config.hpp"

#include <json.hpp>

#include "eppool/util.hpp"

namespace eppool {

namespace {

using nlohmann::json;

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::array<double, ParamVector::dim> to_params(const json& j, const char* what) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != ParamVector::dim)
    throw ParseError(std::string(what) + " must list exactly " +
                     std::to_string(ParamVector::dim) + " values");
  std::array<double, ParamVector::dim> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  RunConfig cfg;
  try {
    maybe(j, "year_start", cfg.year_start);
    maybe(j, "year_end", cfg.year_end);
    maybe(j, "seed", cfg.seed);
    maybe(j, "out_dir", cfg.out_dir);

    if (j.contains("areas")) {
      for (const auto& ja : j.at("areas")) {
        AreaConfig a;
        a.id = ja.at("id").get<std::string>();
        maybe(ja, "anc", a.anc_path);
        maybe(ja, "npbs", a.npbs_path);
        maybe(ja, "demography", a.demography_path);
        maybe(ja, "initial_population", a.initial_population);
        if (ja.contains("ensemble"))
          a.ensemble_path = ja.at("ensemble").get<std::string>();
        cfg.areas.push_back(std::move(a));
      }
    }

    if (j.contains("likelihood")) {
      const auto& jl = j.at("likelihood");
      maybe(jl, "sigma_site", cfg.likelihood.sigma_site);
      maybe(jl, "sigma_extra", cfg.likelihood.sigma_extra);
      maybe(jl, "continuity", cfg.likelihood.continuity);
    }
    if (j.contains("projection")) {
      const auto& jp = j.at("projection");
      maybe(jp, "dt", cfg.projection.dt);
      maybe(jp, "seed_fraction", cfg.projection.seed_fraction);
      maybe(jp, "hiv_mortality", cfg.projection.hiv_mortality);
    }
    if (j.contains("prior")) {
      const auto& jp = j.at("prior");
      if (jp.contains("mean")) cfg.prior.mean = to_params(jp.at("mean"), "prior.mean");
      if (jp.contains("sd")) cfg.prior.sd = to_params(jp.at("sd"), "prior.sd");
      maybe(jp, "t0_lo", cfg.prior.t0_lo);
      maybe(jp, "t0_hi", cfg.prior.t0_hi);
    }
    if (j.contains("imis")) {
      const auto& ji = j.at("imis");
      maybe(ji, "n_initial", cfg.imis.n_initial);
      maybe(ji, "n_per_iter", cfg.imis.n_per_iter);
      maybe(ji, "max_iterations", cfg.imis.max_iterations);
      maybe(ji, "stop_max_weight", cfg.imis.stop_max_weight);
      maybe(ji, "store_threshold", cfg.imis.store_threshold);
      maybe(ji, "threads", cfg.imis.threads);
    }
    if (j.contains("pooling")) {
      const auto& jp = j.at("pooling");
      if (jp.contains("lambda"))
        cfg.pooling.lambda = to_params(jp.at("lambda"), "pooling.lambda");
      maybe(jp, "n_candidates", cfg.pooling.n_candidates);
      maybe(jp, "n_draws", cfg.pooling.n_draws);
      maybe(jp, "ess_warning", cfg.pooling.ess_warning);
      maybe(jp, "correlation_years", cfg.pooling.correlation_years);
    }
    if (j.contains("simulate")) {
      const auto& js = j.at("simulate");
      maybe(js, "site_count", cfg.simulation.site_count);
      maybe(js, "anc_sample_size", cfg.simulation.anc_sample_size);
      maybe(js, "anc_years", cfg.simulation.anc_years);
      maybe(js, "npbs_years", cfg.simulation.npbs_years);
      maybe(js, "npbs_se", cfg.simulation.npbs_se);
      maybe(js, "sigma_site", cfg.simulation.sigma_site);
      if (js.contains("truth"))
        cfg.simulation_truth =
            ParamVector::from_array(to_params(js.at("truth"), "simulate.truth"));
    }
    if (j.contains("evaluate")) {
      const auto& je = j.at("evaluate");
      maybe(je, "n_candidates", cfg.scenario_candidates);
      maybe(je, "n_eval_draws", cfg.scenario_eval_draws);
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  if (cfg.imis.rng_seed == 0) cfg.imis.rng_seed = cfg.seed;
  return cfg;
}

}  // namespace eppool
