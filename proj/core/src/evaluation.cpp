#include "eppool/evaluation.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "eppool/util.hpp"

namespace eppool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double normal_cdf(double x) {
  static const boost::math::normal_distribution<double> d(0.0, 1.0);
  return boost::math::cdf(d, x);
}

int count_sites(const AreaDataset& ds) {
  std::vector<std::string> ids;
  for (const auto& o : ds.anc) ids.push_back(o.site_id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return static_cast<int>(ids.size());
}

}  // namespace

AreaDataset truncate_dataset(const AreaDataset& ds) {
  const auto years = data_years(ds);
  const int n = static_cast<int>(years.size());
  if (n < 3)
    throw ValidationError("cannot truncate: fewer than 3 data years in area '" +
                          ds.area_id + "'");

  // First block ceil(n/3) years; the rest balanced, middle taking the extra.
  const int first = (n + 2) / 3;
  const int middle = (n - first + 1) / 2;
  const int mid_lo = years[first];
  const int mid_hi = years[first + middle - 1];

  AreaDataset out;
  out.area_id = ds.area_id;
  out.demography = ds.demography;
  for (const auto& o : ds.anc)
    if (o.year >= mid_lo && o.year <= mid_hi) out.anc.push_back(o);
  if (!ds.npbs.empty()) {
    const auto earliest = std::min_element(
        ds.npbs.begin(), ds.npbs.end(),
        [](const NpbsObservation& a, const NpbsObservation& b) {
          return a.year < b.year;  // ties keep input order
        });
    out.npbs.push_back(*earliest);
  }
  validate(out);
  return out;
}

ExpectedLoglik expected_loglik(const std::vector<ParamVector>& samples,
                               const AreaDataset& ds, const LikelihoodConfig& cfg,
                               const ProjectionConfig& proj) {
  if (samples.empty())
    throw std::invalid_argument("expected_loglik over an empty sample set");
  double sum = 0.0;
  int inadmissible = 0;
  for (const auto& theta : samples) {
    double ll;
    try {
      ll = total_loglik(theta, ds, cfg, proj);
    } catch (const NumericalError&) {
      ll = kNegInf;
    }
    if (ll == kNegInf) ++inadmissible;
    sum += ll;
  }
  ExpectedLoglik out;
  out.inadmissible_fraction =
      static_cast<double>(inadmissible) / static_cast<double>(samples.size());
  out.value = sum / static_cast<double>(samples.size());
  return out;
}

AreaDataset simulate_dataset(const ParamVector& truth, const Demography& demog,
                             const SimulationConfig& sim, std::uint64_t seed,
                             const std::string& area_id,
                             const ProjectionConfig& proj) {
  const Trajectory traj =
      project(truth, demog, demog.year_start, demog.year_end, proj);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  AreaDataset ds;
  ds.area_id = area_id;
  ds.demography = demog;

  for (int s = 0; s < sim.site_count; ++s) {
    const double site_effect = sim.sigma_site * gauss(rng);
    for (int year : sim.anc_years) {
      const double rho = std::clamp(traj.prevalence_at(year), 1e-10, 1.0 - 1e-10);
      const double p = normal_cdf(probit(rho) + truth.beta4 + site_effect);
      std::binomial_distribution<int> binom(sim.anc_sample_size, p);
      AncObservation o;
      o.site_id = "site" + std::to_string(s);
      o.year = year;
      o.sample_size = sim.anc_sample_size;
      o.prevalence =
          static_cast<double>(binom(rng)) / static_cast<double>(sim.anc_sample_size);
      ds.anc.push_back(std::move(o));
    }
  }
  for (int year : sim.npbs_years) {
    const double rho = std::clamp(traj.prevalence_at(year), 1e-10, 1.0 - 1e-10);
    const double w = probit(rho);
    const double se_probit = sim.npbs_se / probit_density(w);
    NpbsObservation o;
    o.year = year;
    o.prevalence = normal_cdf(w + se_probit * gauss(rng));
    o.std_error = sim.npbs_se;
    ds.npbs.push_back(o);
  }
  validate(ds);
  return ds;
}

namespace {

std::vector<ParamVector> joint_marginal_draws(const JointEnsemble& joint,
                                              const WeightedEnsemble& ens,
                                              int area, int n, std::uint64_t seed) {
  const auto rows = resample_indices(joint.log_weights, n, seed);
  std::vector<ParamVector> out;
  out.reserve(rows.size());
  for (int row : rows) out.push_back(ens.param(joint.tuples(row, area)));
  return out;
}

}  // namespace

std::vector<ScenarioRow> scenario_table(const std::vector<AreaDataset>& areas,
                                        const ScenarioConfig& cfg,
                                        std::uint64_t seed) {
  const int k = static_cast<int>(areas.size());
  if (k < 2) throw ValidationError("scenario_table needs at least 2 areas");

  std::vector<AreaDataset> truncated;
  std::vector<WeightedEnsemble> fit_full, fit_trunc;
  for (int i = 0; i < k; ++i) {
    truncated.push_back(truncate_dataset(areas[i]));
    ImisConfig imis = cfg.imis;
    imis.rng_seed = seed + 101 * static_cast<std::uint64_t>(i);
    fit_full.push_back(
        imis_fit(areas[i], cfg.prior, cfg.likelihood, imis, cfg.projection));
    imis.rng_seed = seed + 101 * static_cast<std::uint64_t>(i) + 7;
    fit_trunc.push_back(
        imis_fit(truncated[i], cfg.prior, cfg.likelihood, imis, cfg.projection));
  }

  // Scenario 1: every area with full data.
  const auto tuples1 = combine(fit_full, cfg.n_candidates, seed + 1);
  const auto joint1 = reweight(tuples1, fit_full, cfg.hier);

  std::vector<ScenarioRow> rows;
  for (int i = 0; i < k; ++i) {
    const std::uint64_t s = seed + 9001 * static_cast<std::uint64_t>(i);

    const auto ind_full = resample(fit_full[i], cfg.n_eval_draws, s + 1);
    const auto ind_trunc = resample(fit_trunc[i], cfg.n_eval_draws, s + 2);
    const double ind_full_full =
        expected_loglik(ind_full, areas[i], cfg.likelihood, cfg.projection).value;
    const double ind_full_trunc =
        expected_loglik(ind_trunc, areas[i], cfg.likelihood, cfg.projection).value;
    const double ind_trunc_trunc =
        expected_loglik(ind_trunc, truncated[i], cfg.likelihood, cfg.projection).value;

    const auto hier_full = joint_marginal_draws(joint1, fit_full[i], i,
                                                cfg.n_eval_draws, s + 3);
    const double hier_full_full =
        expected_loglik(hier_full, areas[i], cfg.likelihood, cfg.projection).value;

    // Scenario 2: this area truncated, the rest with full data.
    std::vector<WeightedEnsemble> mixed = fit_full;
    mixed[i] = fit_trunc[i];
    const auto tuples2 = combine(mixed, cfg.n_candidates, s + 4);
    const auto joint2 = reweight(tuples2, mixed, cfg.hier);
    const auto hier_trunc = joint_marginal_draws(joint2, mixed[i], i,
                                                 cfg.n_eval_draws, s + 5);
    const double hier_full_trunc =
        expected_loglik(hier_trunc, areas[i], cfg.likelihood, cfg.projection).value;
    const double hier_trunc_trunc =
        expected_loglik(hier_trunc, truncated[i], cfg.likelihood, cfg.projection).value;

    ScenarioRow row;
    row.area = areas[i].area_id;
    row.n_data_years = static_cast<int>(data_years(areas[i]).size());
    row.n_anc_sites = count_sites(areas[i]);
    row.d_full_full = hier_full_full - ind_full_full;
    row.d_full_trunc = hier_full_trunc - ind_full_trunc;
    row.d_trunc_trunc = hier_trunc_trunc - ind_trunc_trunc;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string serialize_scenario_csv(const std::vector<ScenarioRow>& rows) {
  std::ostringstream ss;
  ss.precision(10);
  ss << "area,n_data_years,n_anc_sites,d_full_full,d_full_trunc,d_trunc_trunc\n";
  for (const auto& r : rows)
    ss << r.area << ',' << r.n_data_years << ',' << r.n_anc_sites << ','
       << r.d_full_full << ',' << r.d_full_trunc << ',' << r.d_trunc_trunc << '\n';
  return ss.str();
}

}  // namespace eppool
