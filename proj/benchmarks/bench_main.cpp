#include <benchmark/benchmark.h>

#include <random>

#include "eppool/dynamics.hpp"
#include "eppool/evaluation.hpp"
#include "eppool/likelihood.hpp"
#include "eppool/pooling.hpp"
#include "eppool/priors.hpp"

using namespace eppool;

namespace {

ParamVector prior_means() {
  ParamVector p;
  p.t0 = 1980.0;
  p.t1 = 20.0;
  p.log_r0 = 0.42;
  p.beta0 = 0.46;
  p.beta1 = 0.17;
  p.beta2 = -0.68;
  p.beta3 = -0.038;
  p.beta4 = 0.14;
  return p;
}

AreaDataset synthetic_area() {
  SimulationConfig sim;
  sim.site_count = 6;
  sim.anc_sample_size = 300;
  for (int y = 1992; y <= 2008; ++y) sim.anc_years.push_back(y);
  sim.npbs_years = {2001, 2006};
  return simulate_dataset(prior_means(), Demography::flat(1e6, 1970, 2010), sim, 1);
}

void bm_project(benchmark::State& state) {
  const auto demog = Demography::flat(1e6, 1970, 2015);
  const auto p = prior_means();
  for (auto _ : state)
    benchmark::DoNotOptimize(project(p, demog, 1970, 2015));
}
BENCHMARK(bm_project);

void bm_total_loglik(benchmark::State& state) {
  const auto ds = synthetic_area();
  const auto p = prior_means();
  for (auto _ : state)
    benchmark::DoNotOptimize(total_loglik(p, ds, {}));
}
BENCHMARK(bm_total_loglik);

void bm_hier_logprior(benchmark::State& state) {
  const auto cfg = HierPriorConfig::from_lambda(HierPriorConfig::default_lambda());
  const IndependentPrior prior;
  std::mt19937_64 rng(3);
  std::vector<ParamVector> thetas;
  for (int i = 0; i < 10; ++i) thetas.push_back(prior.sample(rng));
  for (auto _ : state)
    benchmark::DoNotOptimize(hier_logprior(thetas, cfg));
}
BENCHMARK(bm_hier_logprior);

void bm_reweight(benchmark::State& state) {
  const IndependentPrior prior;
  std::mt19937_64 rng(5);
  std::vector<WeightedEnsemble> ens(3);
  for (auto& e : ens) {
    const int n = 2000;
    e.samples.resize(n, ParamVector::dim);
    for (int i = 0; i < n; ++i)
      e.samples.row(i) = Eigen::Map<const Eigen::Matrix<double, 1, ParamVector::dim>>(
          prior.sample(rng).as_array().data());
    e.log_weights = Eigen::VectorXd::Constant(n, -std::log(double(n)));
    e.loglik = Eigen::VectorXd::Zero(n);
    e.sampler_logdensity = Eigen::VectorXd::Zero(n);
  }
  const auto hier = HierPriorConfig::from_lambda(HierPriorConfig::default_lambda());
  const auto tuples = combine(ens, static_cast<int>(state.range(0)), 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(reweight(tuples, ens, hier));
}
BENCHMARK(bm_reweight)->Arg(10000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
