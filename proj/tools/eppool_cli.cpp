// Command-line front end: fit areas independently with IMIS, pool fitted
// ensembles into the hierarchical joint posterior, run the predictive
// evaluation, or generate synthetic surveillance data.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "eppool/config.hpp"
#include "eppool/csv.hpp"
#include "eppool/ensemble_io.hpp"
#include "eppool/evaluation.hpp"
#include "eppool/pooling.hpp"
#include "eppool/util.hpp"

namespace fs = std::filesystem;
using namespace eppool;

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::vector<double>> lambda;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Run config (JSON)")
      ->required();
  cmd->add_option("--seed", opts.seed, "Override the config seed");
  cmd->add_option("--out-dir", opts.out_dir, "Override the output directory");
  cmd->add_option("--lambda", opts.lambda,
                  "Comma list of 8 pooling ratios, ParamVector order")
      ->delimiter(',')
      ->expected(1, ParamVector::dim);
  cmd->add_option("--threads", opts.threads, "Likelihood evaluation threads");
}

RunConfig load(const CommonOpts& opts) {
  RunConfig cfg = load_run_config(opts.config_path);
  if (opts.seed) {
    cfg.seed = *opts.seed;
    cfg.imis.rng_seed = *opts.seed;
  }
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  if (opts.threads) cfg.imis.threads = *opts.threads;
  if (opts.lambda) {
    if (opts.lambda->size() != ParamVector::dim)
      throw ParseError("--lambda needs exactly 8 values");
    std::copy(opts.lambda->begin(), opts.lambda->end(), cfg.pooling.lambda.begin());
  }
  return cfg;
}

AreaDataset load_area(const AreaConfig& a) {
  return load_area_dataset(a.anc_path, a.npbs_path, a.demography_path, a.id,
                           a.initial_population);
}

std::string quantile_csv(const std::vector<std::string>& ids,
                         const std::vector<TrajectoryQuantiles>& quantiles) {
  std::ostringstream ss;
  ss.precision(10);
  ss << "area,year,q05,q50,q95\n";
  for (std::size_t a = 0; a < quantiles.size(); ++a)
    for (std::size_t y = 0; y < quantiles[a].q50.size(); ++y)
      ss << ids[a] << ',' << quantiles[a].year_start + static_cast<int>(y) << ','
         << quantiles[a].q05[y] << ',' << quantiles[a].q50[y] << ','
         << quantiles[a].q95[y] << '\n';
  return ss.str();
}

int cmd_fit(const CommonOpts& opts) {
  const RunConfig cfg = load(opts);
  if (cfg.areas.empty()) throw ValidationError("config names no areas");

  for (std::size_t i = 0; i < cfg.areas.size(); ++i) {
    const auto& area_cfg = cfg.areas[i];
    const AreaDataset ds = load_area(area_cfg);

    ImisConfig imis = cfg.imis;
    imis.rng_seed = cfg.seed + 101 * i;
    const WeightedEnsemble ens =
        imis_fit(ds, cfg.prior, cfg.likelihood, imis, cfg.projection);

    const fs::path out(cfg.out_dir);
    write_ensemble_csv((out / (area_cfg.id + "_ensemble.csv")).string(), ens);
    write_diagnostics_json((out / (area_cfg.id + "_diagnostics.json")).string(),
                           ens.diagnostics);

    // Single-area posterior prevalence quantiles via a self-joint.
    Eigen::MatrixXi tuples = combine({ens}, cfg.pooling.n_draws, cfg.seed + 11 * i);
    const auto quantiles =
        pooled_trajectories(uniform_joint(tuples), {ens}, {ds},
                            cfg.pooling.n_draws, cfg.seed + 13 * i, cfg.projection);
    atomic_write_file((out / (area_cfg.id + "_trajectory.csv")).string(),
                      quantile_csv({area_cfg.id}, quantiles));
    std::cerr << "fit " << area_cfg.id << ": " << ens.size() << " samples, "
              << ens.diagnostics.iterations << " iterations, max weight "
              << ens.diagnostics.max_weight << "\n";
  }
  return 0;
}

int cmd_pool(const CommonOpts& opts) {
  const RunConfig cfg = load(opts);
  if (cfg.areas.empty()) throw ValidationError("config names no areas");

  std::vector<WeightedEnsemble> ensembles;
  std::vector<AreaDataset> datasets;
  std::vector<std::string> ids;
  const fs::path out(cfg.out_dir);
  for (const auto& a : cfg.areas) {
    const std::string ens_path =
        a.ensemble_path ? *a.ensemble_path
                        : (out / (a.id + "_ensemble.csv")).string();
    ensembles.push_back(read_ensemble_csv(ens_path));
    datasets.push_back(load_area(a));
    ids.push_back(a.id);
  }

  const auto hier = HierPriorConfig::from_lambda(cfg.pooling.lambda, cfg.prior);
  const auto tuples = combine(ensembles, cfg.pooling.n_candidates, cfg.seed);
  const auto joint = reweight(tuples, ensembles, hier);
  if (joint.ess < cfg.pooling.ess_warning)
    std::cerr << "warning: joint ESS " << joint.ess << " is below "
              << cfg.pooling.ess_warning << "; increase pooling.n_candidates\n";

  {
    const auto rows = resample_indices(joint.log_weights, cfg.pooling.n_draws,
                                       cfg.seed + 1);
    std::ostringstream ss;
    ss.precision(17);
    ss << "draw,area";
    for (const char* name : ParamVector::names()) ss << ',' << name;
    ss << '\n';
    for (std::size_t d = 0; d < rows.size(); ++d)
      for (std::size_t a = 0; a < ensembles.size(); ++a) {
        ss << d << ',' << ids[a];
        const ParamVector th =
            ensembles[a].param(joint.tuples(rows[d], static_cast<int>(a)));
        for (int j = 0; j < ParamVector::dim; ++j) ss << ',' << th[j];
        ss << '\n';
      }
    atomic_write_file((out / "joint_draws.csv").string(), ss.str());
  }

  const auto quantiles = pooled_trajectories(joint, ensembles, datasets,
                                             cfg.pooling.n_draws, cfg.seed + 2,
                                             cfg.projection);
  atomic_write_file((out / "pooled_trajectories.csv").string(),
                    quantile_csv(ids, quantiles));

  for (int year : cfg.pooling.correlation_years) {
    const auto corr =
        cross_area_correlation(joint, ensembles, datasets,
                               TrajectoryOutput::prevalence, year, cfg.projection);
    std::ostringstream ss;
    ss.precision(10);
    ss << "area";
    for (const auto& id : ids) ss << ',' << id;
    ss << '\n';
    for (std::size_t a = 0; a < ids.size(); ++a) {
      ss << ids[a];
      for (std::size_t c = 0; c < ids.size(); ++c)
        ss << ',' << corr(static_cast<int>(a), static_cast<int>(c));
      ss << '\n';
    }
    atomic_write_file(
        (out / ("correlation_" + std::to_string(year) + ".csv")).string(),
        ss.str());
  }
  std::cerr << "pooled " << ids.size() << " areas, ESS " << joint.ess << "\n";
  return 0;
}

int cmd_evaluate(const CommonOpts& opts) {
  const RunConfig cfg = load(opts);
  if (cfg.areas.size() < 2)
    throw ValidationError("evaluate needs at least 2 areas in one country");

  std::vector<AreaDataset> areas;
  for (const auto& a : cfg.areas) areas.push_back(load_area(a));

  ScenarioConfig scen;
  scen.likelihood = cfg.likelihood;
  scen.projection = cfg.projection;
  scen.imis = cfg.imis;
  scen.prior = cfg.prior;
  scen.hier = HierPriorConfig::from_lambda(cfg.pooling.lambda, cfg.prior);
  scen.n_candidates = cfg.scenario_candidates;
  scen.n_eval_draws = cfg.scenario_eval_draws;

  const auto rows = scenario_table(areas, scen, cfg.seed);
  atomic_write_file((fs::path(cfg.out_dir) / "evaluation.csv").string(),
                    serialize_scenario_csv(rows));
  return 0;
}

int cmd_simulate(const CommonOpts& opts) {
  const RunConfig cfg = load(opts);
  const fs::path out(cfg.out_dir);

  std::vector<std::string> ids;
  if (cfg.areas.empty()) {
    ids.emplace_back("synthetic");
  } else {
    for (const auto& a : cfg.areas) ids.push_back(a.id);
  }

  const Demography demog = Demography::flat(
      cfg.areas.empty() ? 1e6 : cfg.areas.front().initial_population,
      cfg.year_start, cfg.year_end);

  for (std::size_t i = 0; i < ids.size(); ++i) {
    const AreaDataset ds =
        simulate_dataset(cfg.simulation_truth, demog, cfg.simulation,
                         cfg.seed + 997 * i, ids[i], cfg.projection);
    atomic_write_file((out / (ids[i] + "_anc.csv")).string(),
                      serialize_anc_csv(ds.anc));
    atomic_write_file((out / (ids[i] + "_npbs.csv")).string(),
                      serialize_npbs_csv(ds.npbs));
    atomic_write_file((out / (ids[i] + "_demography.csv")).string(),
                      serialize_demography_csv(ds.demography));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-national HIV epidemic estimation and hierarchical pooling"};
  app.require_subcommand(1);

  CommonOpts fit_opts, pool_opts, eval_opts, sim_opts;
  add_common(app.add_subcommand("fit", "Fit each area independently with IMIS"),
             fit_opts);
  add_common(app.add_subcommand("pool", "Pool fitted ensembles hierarchically"),
             pool_opts);
  add_common(app.add_subcommand(
                 "evaluate", "Truncation-based predictive evaluation report"),
             eval_opts);
  add_common(app.add_subcommand("simulate", "Generate synthetic datasets"),
             sim_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("fit")) return cmd_fit(fit_opts);
    if (app.got_subcommand("pool")) return cmd_pool(pool_opts);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(eval_opts);
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_opts);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
