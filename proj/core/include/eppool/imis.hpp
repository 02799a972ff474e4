#ifndef EPPOOL_IMIS_HPP
#define EPPOOL_IMIS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "eppool/dynamics.hpp"
#include "eppool/likelihood.hpp"
#include "eppool/priors.hpp"
#include "eppool/types.hpp"

namespace eppool {

struct ImisConfig {
  int n_initial = 10000;        // draws from the prior at step 1
  int n_per_iter = 1000;        // B: new draws per mixture component
  int max_iterations = 100;
  std::uint64_t rng_seed = 0;
  double stop_max_weight = 0.05;   // stop when max normalized weight is below
  double store_threshold = 1e-6;   // drop samples below this normalized weight
  int threads = 1;                 // likelihood evaluation batch parallelism
};

struct ImisDiagnostics {
  int iterations = 0;
  double max_weight = 0.0;
  double expected_unique_fraction = 0.0;
  int n_evaluated = 0;
  int n_stored = 0;
  std::vector<double> ess_history;  // ESS after each weight update
};

/// Posterior parameter samples with normalized importance log-weights and
/// sampler provenance. Immutable once returned.
struct WeightedEnsemble {
  Eigen::MatrixXd samples;            // n x d, one draw per row
  Eigen::VectorXd log_weights;        // logsumexp == 0
  Eigen::VectorXd sampler_logdensity; // final mixture density at each draw
  Eigen::VectorXd loglik;
  ImisDiagnostics diagnostics;

  int size() const { return static_cast<int>(samples.rows()); }
  int dim() const { return static_cast<int>(samples.cols()); }
  ParamVector param(int i) const;
  double ess() const;
};

/// Target interface so the sampler can be exercised on analytic toys as
/// well as the epidemic posterior.
struct ImisTarget {
  int dim = 0;
  std::function<Eigen::VectorXd(std::mt19937_64&)> sample_prior;
  std::function<double(const Eigen::VectorXd&)> log_prior;
  std::function<double(const Eigen::VectorXd&)> log_lik;
  Eigen::VectorXd prior_scale;  // per-coordinate SD used for distances
};

ImisTarget epidemic_target(const AreaDataset& ds, const IndependentPrior& prior,
                           const LikelihoodConfig& lik_cfg,
                           const ProjectionConfig& proj_cfg);

WeightedEnsemble imis_fit(const ImisTarget& target, const ImisConfig& cfg);

WeightedEnsemble imis_fit(const AreaDataset& ds, const IndependentPrior& prior,
                          const LikelihoodConfig& lik_cfg, const ImisConfig& cfg,
                          const ProjectionConfig& proj_cfg = {});

/// Multinomial resample by normalized log-weights; deterministic per seed.
std::vector<int> resample_indices(const Eigen::VectorXd& log_weights, int n,
                                  std::uint64_t seed);
std::vector<ParamVector> resample(const WeightedEnsemble& ens, int n,
                                  std::uint64_t seed);

}  // namespace eppool

#endif
