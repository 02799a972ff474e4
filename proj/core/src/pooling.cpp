#include "eppool/pooling.hpp"

#include <cmath>
#include <limits>

#include "eppool/util.hpp"

namespace eppool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> weight_cdf(const WeightedEnsemble& ens) {
  std::vector<double> cdf(ens.size());
  double acc = 0.0;
  for (int i = 0; i < ens.size(); ++i) {
    acc += std::exp(ens.log_weights[i]);
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

/// Per-area, per-stored-sample output values at one year; tuples index into
/// these so no trajectory is projected more than once per sample.
Eigen::VectorXd sample_outputs(const WeightedEnsemble& ens, const AreaDataset& ds,
                               TrajectoryOutput output, int year,
                               const ProjectionConfig& proj) {
  Eigen::VectorXd values(ens.size());
  for (int i = 0; i < ens.size(); ++i) {
    const Trajectory traj =
        project(ens.param(i), ds.demography, ds.demography.year_start,
                ds.demography.year_end, proj);
    const int idx = traj.index(year);
    values[i] = output == TrajectoryOutput::prevalence ? traj.prevalence[idx]
                                                       : traj.incidence[idx];
  }
  return values;
}

}  // namespace

Eigen::MatrixXi combine(const std::vector<WeightedEnsemble>& ensembles, int m,
                        std::uint64_t seed) {
  if (ensembles.empty()) throw std::invalid_argument("combine needs >= 1 ensemble");
  for (const auto& e : ensembles)
    if (e.size() == 0) throw std::invalid_argument("combine: empty ensemble");

  const auto k = static_cast<int>(ensembles.size());
  std::vector<std::vector<double>> cdfs;
  cdfs.reserve(ensembles.size());
  for (const auto& e : ensembles) cdfs.push_back(weight_cdf(e));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXi tuples(m, k);
  for (int row = 0; row < m; ++row)
    for (int a = 0; a < k; ++a) {
      const double u = unif(rng);
      tuples(row, a) = static_cast<int>(
          std::lower_bound(cdfs[a].begin(), cdfs[a].end(), u) - cdfs[a].begin());
    }
  return tuples;
}

JointEnsemble reweight(const Eigen::MatrixXi& tuples,
                       const std::vector<WeightedEnsemble>& ensembles,
                       const HierPriorConfig& hier) {
  const int m = static_cast<int>(tuples.rows());
  const int k = static_cast<int>(tuples.cols());
  if (k != static_cast<int>(ensembles.size()))
    throw std::invalid_argument("tuple width does not match ensemble count");

  // Marginal log-densities cached per (area, sample).
  std::vector<Eigen::VectorXd> marginal(ensembles.size());
  for (int a = 0; a < k; ++a) {
    marginal[a].resize(ensembles[a].size());
    for (int i = 0; i < ensembles[a].size(); ++i)
      marginal[a][i] = hier_marginal_logprior(ensembles[a].param(i), hier);
  }

  JointEnsemble joint;
  joint.tuples = tuples;
  joint.log_weights.resize(m);
  std::vector<ParamVector> thetas(k);
  for (int row = 0; row < m; ++row) {
    double marg_sum = 0.0;
    for (int a = 0; a < k; ++a) {
      thetas[a] = ensembles[a].param(tuples(row, a));
      marg_sum += marginal[a][tuples(row, a)];
    }
    joint.log_weights[row] = hier_logprior(thetas, hier) - marg_sum;
  }

  const double norm = logsumexp(joint.log_weights);
  if (!std::isfinite(norm))
    throw SamplerError("every joint tuple has zero prior-ratio weight");
  joint.log_weights.array() -= norm;
  joint.ess = 1.0 / joint.log_weights.array().exp().square().sum();
  return joint;
}

JointEnsemble uniform_joint(const Eigen::MatrixXi& tuples) {
  JointEnsemble joint;
  joint.tuples = tuples;
  const auto m = tuples.rows();
  joint.log_weights =
      Eigen::VectorXd::Constant(m, -std::log(static_cast<double>(m)));
  joint.ess = static_cast<double>(m);
  return joint;
}

std::vector<TrajectoryQuantiles> pooled_trajectories(
    const JointEnsemble& joint, const std::vector<WeightedEnsemble>& ensembles,
    const std::vector<AreaDataset>& datasets, int n_draws, std::uint64_t seed,
    const ProjectionConfig& proj) {
  const int k = joint.n_areas();
  if (k != static_cast<int>(datasets.size()))
    throw std::invalid_argument("dataset count does not match joint ensemble");

  const auto rows = resample_indices(joint.log_weights, n_draws, seed);

  std::vector<TrajectoryQuantiles> result(k);
  for (int a = 0; a < k; ++a) {
    const auto& demog = datasets[a].demography;
    const int n_years = demog.n_years();

    // Project each stored sample once; draws re-index the cached curves.
    Eigen::MatrixXd curves(ensembles[a].size(), n_years);
    for (int i = 0; i < ensembles[a].size(); ++i) {
      const Trajectory traj = project(ensembles[a].param(i), demog,
                                      demog.year_start, demog.year_end, proj);
      for (int y = 0; y < n_years; ++y) curves(i, y) = traj.prevalence[y];
    }

    TrajectoryQuantiles tq;
    tq.year_start = demog.year_start;
    std::vector<double> values(rows.size());
    for (int y = 0; y < n_years; ++y) {
      for (std::size_t d = 0; d < rows.size(); ++d)
        values[d] = curves(joint.tuples(rows[d], a), y);
      tq.q05.push_back(quantile(values, 0.05));
      tq.q50.push_back(quantile(values, 0.50));
      tq.q95.push_back(quantile(values, 0.95));
    }
    result[a] = std::move(tq);
  }
  return result;
}

Eigen::MatrixXd cross_area_correlation(const JointEnsemble& joint,
                                       const std::vector<Eigen::VectorXd>& values) {
  const int k = joint.n_areas();
  if (k != static_cast<int>(values.size()))
    throw std::invalid_argument("value vector count does not match joint ensemble");
  const int m = joint.size();

  const Eigen::VectorXd w = joint.log_weights.array().exp();
  Eigen::MatrixXd x(m, k);
  for (int row = 0; row < m; ++row)
    for (int a = 0; a < k; ++a) x(row, a) = values[a][joint.tuples(row, a)];

  const Eigen::VectorXd mean = x.transpose() * w;
  Eigen::MatrixXd centered = x.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * (w.asDiagonal() * centered);

  // Variances indistinguishable from rounding noise count as degenerate.
  std::vector<bool> degenerate(k);
  for (int a = 0; a < k; ++a)
    degenerate[a] = cov(a, a) <= 1e-20 * (1.0 + mean[a] * mean[a]);

  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(k, k);
  for (int a = 0; a < k; ++a)
    for (int c = a + 1; c < k; ++c) {
      corr(a, c) = degenerate[a] || degenerate[c]
                       ? std::numeric_limits<double>::quiet_NaN()
                       : cov(a, c) / std::sqrt(cov(a, a) * cov(c, c));
      corr(c, a) = corr(a, c);
    }
  return corr;
}

Eigen::MatrixXd cross_area_correlation(const JointEnsemble& joint,
                                       const std::vector<WeightedEnsemble>& ensembles,
                                       const std::vector<AreaDataset>& datasets,
                                       TrajectoryOutput output, int year,
                                       const ProjectionConfig& proj) {
  std::vector<Eigen::VectorXd> values;
  values.reserve(ensembles.size());
  for (std::size_t a = 0; a < ensembles.size(); ++a)
    values.push_back(sample_outputs(ensembles[a], datasets[a], output, year, proj));
  return cross_area_correlation(joint, values);
}

}  // namespace eppool
