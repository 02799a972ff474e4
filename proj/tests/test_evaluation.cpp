#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eppool/evaluation.hpp"
#include "test_support.hpp"

using namespace eppool;
using eppool::testing::normal_pdf;
using eppool::testing::prior_mean_params;
using eppool::testing::simpson;

namespace {

AreaDataset yearly_dataset(const std::vector<int>& anc_years,
                           const std::vector<int>& npbs_years) {
  AreaDataset ds;
  ds.area_id = "a";
  ds.demography = Demography::flat(1e6, 1970, 2015);
  for (int y : anc_years) ds.anc.push_back({"s", y, 0.05, 200});
  for (int y : npbs_years) ds.npbs.push_back({y, 0.04, 0.005});
  return ds;
}

std::set<int> anc_years_of(const AreaDataset& ds) {
  std::set<int> years;
  for (const auto& o : ds.anc) years.insert(o.year);
  return years;
}

}  // namespace

TEST_CASE("four data years keep only the third for ANC") {
  // Blocks {y1,y2}, {y3}, {y4}: ANC survives in the middle block only.
  const auto ds = yearly_dataset({2000, 2002, 2005, 2008}, {});
  const auto trunc = truncate_dataset(ds);
  CHECK(anc_years_of(trunc) == std::set<int>{2005});
  CHECK(trunc.npbs.empty());
}

TEST_CASE("nine data years keep the middle three") {
  std::vector<int> years;
  for (int y = 2000; y < 2009; ++y) years.push_back(y);
  const auto trunc = truncate_dataset(yearly_dataset(years, {}));
  CHECK(anc_years_of(trunc) == std::set<int>{2003, 2004, 2005});
}

TEST_CASE("only the earliest NPBS observation survives truncation") {
  auto ds = yearly_dataset({2000, 2003, 2006}, {});
  ds.npbs = {{2007, 0.05, 0.004}, {2001, 0.03, 0.006}, {2004, 0.04, 0.005}};
  const auto trunc = truncate_dataset(ds);
  REQUIRE(trunc.npbs.size() == 1);
  CHECK(trunc.npbs[0].year == 2001);
  CHECK(trunc.npbs[0].prevalence == 0.03);
}

TEST_CASE("NPBS years count toward the block boundaries") {
  // Data years {2000, 2002, 2005, 2008}: ANC only at 2005 is kept.
  auto ds = yearly_dataset({2002, 2005, 2008}, {2000});
  const auto trunc = truncate_dataset(ds);
  CHECK(anc_years_of(trunc) == std::set<int>{2005});
  REQUIRE(trunc.npbs.size() == 1);
  CHECK(trunc.npbs[0].year == 2000);
}

TEST_CASE("fewer than three data years cannot be truncated") {
  CHECK_THROWS_AS(truncate_dataset(yearly_dataset({2000, 2004}, {})),
                  ValidationError);
  CHECK_THROWS_AS(truncate_dataset(yearly_dataset({}, {2003})), ValidationError);
}

TEST_CASE("truncation preserves area id and demography") {
  const auto ds = yearly_dataset({2000, 2002, 2005, 2008}, {});
  const auto trunc = truncate_dataset(ds);
  CHECK(trunc.area_id == ds.area_id);
  CHECK(trunc.demography.year_start == ds.demography.year_start);
  CHECK(trunc.demography.year_end == ds.demography.year_end);
}

TEST_CASE("expected_loglik averages per-sample log-likelihoods") {
  const auto ds = yearly_dataset({2000, 2004}, {2002});
  const auto p = prior_mean_params();
  ParamVector q = p;
  q.t0 = 1984.0;
  const double lp = total_loglik(p, ds, {});
  const double lq = total_loglik(q, ds, {});
  const auto e = expected_loglik({p, q}, ds, {});
  CHECK(e.value == doctest::Approx(0.5 * (lp + lq)).epsilon(1e-12));
  CHECK(e.inadmissible_fraction == 0.0);

  const auto single = expected_loglik({p}, ds, {});
  CHECK(single.value == doctest::Approx(lp).epsilon(1e-14));
}

TEST_CASE("expected_loglik ignores sample order") {
  const auto ds = yearly_dataset({2000, 2004}, {});
  const auto p = prior_mean_params();
  ParamVector q = p;
  q.log_r0 = 0.6;
  CHECK(expected_loglik({p, q, p}, ds, {}).value ==
        doctest::Approx(expected_loglik({q, p, p}, ds, {}).value).epsilon(1e-14));
}

TEST_CASE("overflowing samples count as inadmissible and force -inf") {
  const auto ds = yearly_dataset({2000}, {});
  const auto p = prior_mean_params();
  ParamVector bad = p;
  bad.log_r0 = 60.0;  // growth rate e^60 blows up the recursion
  const auto e = expected_loglik({p, bad, p, bad}, ds, {});
  CHECK(e.inadmissible_fraction == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.value == -std::numeric_limits<double>::infinity());
}

TEST_CASE("simulated ANC prevalence matches the mixed-probit mean") {
  const auto truth = prior_mean_params();
  const auto demog = Demography::flat(1e6, 1970, 2010);
  SimulationConfig sim;
  sim.site_count = 200;
  sim.anc_sample_size = 2000;
  sim.anc_years = {2000};
  const auto ds = simulate_dataset(truth, demog, sim, 4242);
  REQUIRE(ds.anc.size() == 200);

  const double rho = project(truth, demog, 1970, 2010, {}).prevalence_at(2000);
  auto phi_cdf = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  const double expected = simpson(
      [&](double b) {
        return phi_cdf(probit(rho) + truth.beta4 + b) *
               normal_pdf(b, 0.0, sim.sigma_site);
      },
      -8 * sim.sigma_site, 8 * sim.sigma_site, 4000);
  double mean = 0.0;
  for (const auto& o : ds.anc) mean += o.prevalence;
  mean /= static_cast<double>(ds.anc.size());
  CHECK(std::abs(mean - expected) < 0.01);
  // Positive clinic bias: ANC prevalence sits above the population value.
  CHECK(mean > rho);
}

TEST_CASE("simulated NPBS tracks the population prevalence") {
  const auto truth = prior_mean_params();
  const auto demog = Demography::flat(1e6, 1970, 2010);
  SimulationConfig sim;
  sim.npbs_years = {1998, 2004};
  sim.npbs_se = 0.004;
  double max_err = 0.0;
  const auto traj = project(truth, demog, 1970, 2010, {});
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto ds = simulate_dataset(truth, demog, sim, seed);
    REQUIRE(ds.npbs.size() == 2);
    for (const auto& o : ds.npbs) {
      CHECK(o.std_error == sim.npbs_se);
      max_err = std::max(max_err,
                         std::abs(o.prevalence - traj.prevalence_at(o.year)));
    }
  }
  CHECK(max_err < 5.0 * sim.npbs_se);
  CHECK(max_err > 0.0);
}

TEST_CASE("simulate_dataset is deterministic per seed") {
  const auto truth = prior_mean_params();
  const auto demog = Demography::flat(1e6, 1970, 2005);
  SimulationConfig sim;
  sim.site_count = 3;
  sim.anc_years = {1998, 2001};
  sim.npbs_years = {2000};
  const auto a = simulate_dataset(truth, demog, sim, 7);
  const auto b = simulate_dataset(truth, demog, sim, 7);
  const auto c = simulate_dataset(truth, demog, sim, 8);
  REQUIRE(a.anc.size() == b.anc.size());
  bool equal = true, all_equal_c = true;
  for (std::size_t i = 0; i < a.anc.size(); ++i) {
    equal = equal && a.anc[i].prevalence == b.anc[i].prevalence;
    all_equal_c = all_equal_c && a.anc[i].prevalence == c.anc[i].prevalence;
  }
  CHECK(equal);
  CHECK(!all_equal_c);
  CHECK(a.npbs[0].prevalence == b.npbs[0].prevalence);
}

TEST_CASE("scenario table produces one row per area with its data summary") {
  const auto truth = prior_mean_params();
  const auto demog = Demography::flat(5e5, 1970, 2010);
  SimulationConfig sim;
  sim.site_count = 2;
  sim.anc_sample_size = 300;
  for (int y = 1998; y <= 2006; y += 2) sim.anc_years.push_back(y);
  sim.npbs_years = {2003};
  std::vector<AreaDataset> areas;
  for (int i = 0; i < 2; ++i) {
    ParamVector th = truth;
    th.t0 = 1978.0 + 2.0 * i;
    areas.push_back(
        simulate_dataset(th, demog, sim, 500 + i, "area" + std::to_string(i)));
  }
  ScenarioConfig cfg;
  cfg.imis.n_initial = 400;
  cfg.imis.n_per_iter = 100;
  cfg.imis.max_iterations = 2;
  cfg.n_candidates = 2000;
  cfg.n_eval_draws = 50;
  cfg.hier = HierPriorConfig::from_lambda(HierPriorConfig::default_lambda());
  const auto rows = scenario_table(areas, cfg, 12345);
  REQUIRE(rows.size() == 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].area == areas[i].area_id);
    CHECK(rows[i].n_data_years == 6);
    CHECK(rows[i].n_anc_sites == 2);
    CHECK(std::isfinite(rows[i].d_full_full));
    CHECK(std::isfinite(rows[i].d_full_trunc));
    CHECK(std::isfinite(rows[i].d_trunc_trunc));
  }
  const auto csv = serialize_scenario_csv(rows);
  CHECK(csv.rfind("area,n_data_years,n_anc_sites,d_full_full,d_full_trunc,"
                  "d_trunc_trunc\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("scenario table rejects a single area") {
  const auto ds = yearly_dataset({2000, 2003, 2006}, {});
  CHECK_THROWS_AS(scenario_table({ds}, {}, 1), ValidationError);
}
