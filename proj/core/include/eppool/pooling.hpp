#ifndef EPPOOL_POOLING_HPP
#define EPPOOL_POOLING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "eppool/dynamics.hpp"
#include "eppool/imis.hpp"
#include "eppool/priors.hpp"

namespace eppool {

/// Joint posterior over K areas: rows of sample indices into the K source
/// ensembles with normalized joint log-weights.
struct JointEnsemble {
  Eigen::MatrixXi tuples;       // m x K
  Eigen::VectorXd log_weights;  // logsumexp == 0
  double ess = 0.0;

  int size() const { return static_cast<int>(tuples.rows()); }
  int n_areas() const { return static_cast<int>(tuples.cols()); }
};

/// Draws m candidate index tuples, sampling each area's index independently
/// with probability proportional to its independent-model weight. Under this
/// proposal the joint importance weight reduces to the prior ratio alone.
Eigen::MatrixXi combine(const std::vector<WeightedEnsemble>& ensembles, int m,
                        std::uint64_t seed);

/// Joint log-weight per tuple: log pi_HR(theta_1,...,theta_K) minus the sum
/// of per-area marginal log-densities, normalized. ESS = 1 / sum w^2.
JointEnsemble reweight(const Eigen::MatrixXi& tuples,
                       const std::vector<WeightedEnsemble>& ensembles,
                       const HierPriorConfig& hier);

/// Joint ensemble with all tuple weights equal (prior ratio forced to 1).
JointEnsemble uniform_joint(const Eigen::MatrixXi& tuples);

struct TrajectoryQuantiles {
  int year_start = 0;
  std::vector<double> q05, q50, q95;  // prevalence quantiles per year
};

/// Multinomial-resamples n_draws tuples and summarizes per-area prevalence
/// curves by the median and central 90% interval.
std::vector<TrajectoryQuantiles> pooled_trajectories(
    const JointEnsemble& joint, const std::vector<WeightedEnsemble>& ensembles,
    const std::vector<AreaDataset>& datasets, int n_draws, std::uint64_t seed,
    const ProjectionConfig& proj = {});

enum class TrajectoryOutput { prevalence, incidence };

/// Weighted Pearson correlation across joint tuples of the chosen output at
/// one year; K x K, diagonal 1, NaN where an area-year has zero variance.
Eigen::MatrixXd cross_area_correlation(const JointEnsemble& joint,
                                       const std::vector<WeightedEnsemble>& ensembles,
                                       const std::vector<AreaDataset>& datasets,
                                       TrajectoryOutput output, int year,
                                       const ProjectionConfig& proj = {});

/// Same, over precomputed per-area per-sample output values.
Eigen::MatrixXd cross_area_correlation(const JointEnsemble& joint,
                                       const std::vector<Eigen::VectorXd>& values);

}  // namespace eppool

#endif
