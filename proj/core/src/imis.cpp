#include "eppool/imis.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "eppool/util.hpp"

namespace eppool {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

struct GaussComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd chol;  // lower Cholesky factor of the covariance
  double log_norm;       // -(d/2) log 2pi - sum log diag(L)

  double logpdf(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd z =
        chol.triangularView<Eigen::Lower>().solve(x - mean);
    return log_norm - 0.5 * z.squaredNorm();
  }
};

GaussComponent make_component(const Eigen::VectorXd& mean, Eigen::MatrixXd cov,
                              const Eigen::VectorXd& prior_scale) {
  const auto d = mean.size();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    // Singular neighbor covariance: regularize with a sliver of prior variance.
    for (Eigen::Index j = 0; j < d; ++j)
      cov(j, j) += 1e-6 * prior_scale[j] * prior_scale[j];
    llt.compute(cov);
    if (llt.info() != Eigen::Success)
      throw SamplerError("covariance not positive definite after regularization");
  }
  GaussComponent comp;
  comp.mean = mean;
  comp.chol = llt.matrixL();
  comp.log_norm = -0.5 * static_cast<double>(d) * kLog2Pi -
                  comp.chol.diagonal().array().log().sum();
  return comp;
}

void parallel_eval(const std::function<double(const Eigen::VectorXd&)>& f,
                   const Eigen::MatrixXd& samples, int first_row,
                   Eigen::VectorXd& out, int threads) {
  const int n = static_cast<int>(samples.rows());
  auto work = [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) out[i] = f(samples.row(i).transpose());
  };
  if (threads <= 1 || n - first_row < 2 * threads) {
    work(first_row, n);
    return;
  }
  std::vector<std::thread> pool;
  const int chunk = (n - first_row + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = first_row + t * chunk;
    const int hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace

ParamVector WeightedEnsemble::param(int i) const {
  if (dim() != ParamVector::dim)
    throw std::logic_error("ensemble dimension is not a ParamVector");
  std::array<double, ParamVector::dim> a{};
  for (int j = 0; j < ParamVector::dim; ++j) a[j] = samples(i, j);
  return ParamVector::from_array(a);
}

double WeightedEnsemble::ess() const {
  return 1.0 / log_weights.array().exp().square().sum();
}

WeightedEnsemble imis_fit(const ImisTarget& target, const ImisConfig& cfg) {
  const int d = target.dim;
  const int n0 = cfg.n_initial;
  const int b = cfg.n_per_iter;
  std::mt19937_64 rng(cfg.rng_seed);

  Eigen::MatrixXd samples(n0, d);
  for (int i = 0; i < n0; ++i) samples.row(i) = target.sample_prior(rng).transpose();

  Eigen::VectorXd loglik(n0), logprior(n0);
  parallel_eval(target.log_lik, samples, 0, loglik, cfg.threads);
  parallel_eval(target.log_prior, samples, 0, logprior, cfg.threads);

  // Running log of n0 * prior(x) + b * sum_k component_k(x) per sample.
  const double log_n0 = std::log(static_cast<double>(n0));
  const double log_b = std::log(static_cast<double>(b));
  Eigen::VectorXd mix_acc = logprior.array() + log_n0;

  std::vector<GaussComponent> components;
  Eigen::VectorXd log_w, sampler_logdensity;
  ImisDiagnostics diag;

  auto update_weights = [&] {
    const double log_total = std::log(static_cast<double>(n0) +
                                      static_cast<double>(b) * components.size());
    sampler_logdensity = mix_acc.array() - log_total;
    log_w = loglik + logprior - sampler_logdensity;
    const double norm = logsumexp(log_w);
    if (!std::isfinite(norm))
      throw SamplerError("no admissible draws: every posterior density is zero");
    log_w.array() -= norm;
    diag.ess_history.push_back(1.0 / log_w.array().exp().square().sum());
  };

  update_weights();

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    int max_idx = 0;
    const double max_w = log_w.maxCoeff(&max_idx);
    diag.max_weight = std::exp(max_w);
    if (diag.max_weight < cfg.stop_max_weight) break;
    diag.iterations = iter + 1;

    const int n = static_cast<int>(samples.rows());
    const Eigen::VectorXd center = samples.row(max_idx).transpose();

    // B nearest neighbors under the prior-standardized metric.
    std::vector<std::pair<double, int>> dist(n);
    for (int i = 0; i < n; ++i) {
      const double dd = ((samples.row(i).transpose() - center).array() /
                         target.prior_scale.array())
                            .matrix()
                            .squaredNorm();
      dist[i] = {dd, i};
    }
    const int nn = std::min(b, n);
    std::partial_sort(dist.begin(), dist.begin() + nn, dist.end());

    Eigen::VectorXd nb_w(nn);
    const double unif = 1.0 / static_cast<double>(n);
    for (int k = 0; k < nn; ++k)
      nb_w[k] = 0.5 * (std::exp(log_w[dist[k].second]) + unif);
    nb_w /= nb_w.sum();

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < nn; ++k) {
      const Eigen::VectorXd dx = samples.row(dist[k].second).transpose() - center;
      cov += nb_w[k] * dx * dx.transpose();
    }
    components.push_back(make_component(center, cov, target.prior_scale));
    const GaussComponent& comp = components.back();

    Eigen::MatrixXd fresh(b, d);
    for (int i = 0; i < b; ++i) {
      Eigen::VectorXd z(d);
      for (int j = 0; j < d; ++j) z[j] = gauss(rng);
      fresh.row(i) = (comp.mean + comp.chol * z).transpose();
    }

    samples.conservativeResize(n + b, Eigen::NoChange);
    samples.bottomRows(b) = fresh;
    loglik.conservativeResize(n + b);
    logprior.conservativeResize(n + b);
    mix_acc.conservativeResize(n + b);
    parallel_eval(target.log_lik, samples, n, loglik, cfg.threads);
    parallel_eval(target.log_prior, samples, n, logprior, cfg.threads);

    // Fold the new component into every accumulator; seed new rows with the
    // prior term plus all existing components.
    for (int i = 0; i < n; ++i)
      mix_acc[i] = logsumexp(mix_acc[i], log_b + comp.logpdf(samples.row(i).transpose()));
    for (int i = n; i < n + b; ++i) {
      double acc = log_n0 + logprior[i];
      for (const auto& c : components)
        acc = logsumexp(acc, log_b + c.logpdf(samples.row(i).transpose()));
      mix_acc[i] = acc;
    }

    update_weights();
  }

  int final_max = 0;
  diag.max_weight = std::exp(log_w.maxCoeff(&final_max));
  diag.n_evaluated = static_cast<int>(samples.rows());
  {
    const double m = static_cast<double>(samples.rows());
    double expected_unique = 0.0;
    for (Eigen::Index i = 0; i < log_w.size(); ++i)
      expected_unique += 1.0 - std::pow(1.0 - std::exp(log_w[i]), m);
    diag.expected_unique_fraction = expected_unique / m;
  }

  // Keep samples above the storage threshold, renormalized.
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < log_w.size(); ++i)
    if (std::exp(log_w[i]) > cfg.store_threshold) keep.push_back(static_cast<int>(i));
  if (keep.empty()) throw SamplerError("storage threshold removed every sample");

  WeightedEnsemble ens;
  const auto kept = static_cast<int>(keep.size());
  ens.samples.resize(kept, d);
  ens.log_weights.resize(kept);
  ens.sampler_logdensity.resize(kept);
  ens.loglik.resize(kept);
  for (int i = 0; i < kept; ++i) {
    ens.samples.row(i) = samples.row(keep[i]);
    ens.log_weights[i] = log_w[keep[i]];
    ens.sampler_logdensity[i] = sampler_logdensity[keep[i]];
    ens.loglik[i] = loglik[keep[i]];
  }
  ens.log_weights.array() -= logsumexp(ens.log_weights);
  diag.n_stored = kept;
  ens.diagnostics = std::move(diag);
  return ens;
}

ImisTarget epidemic_target(const AreaDataset& ds, const IndependentPrior& prior,
                           const LikelihoodConfig& lik_cfg,
                           const ProjectionConfig& proj_cfg) {
  ImisTarget target;
  target.dim = ParamVector::dim;
  target.sample_prior = [prior](std::mt19937_64& rng) {
    const auto a = prior.sample(rng).as_array();
    return Eigen::Map<const Eigen::VectorXd>(a.data(), ParamVector::dim).eval();
  };
  target.log_prior = [prior](const Eigen::VectorXd& x) {
    std::array<double, ParamVector::dim> a;
    Eigen::Map<Eigen::VectorXd>(a.data(), ParamVector::dim) = x;
    return prior.log_density(ParamVector::from_array(a));
  };
  target.log_lik = [ds, lik_cfg, proj_cfg](const Eigen::VectorXd& x) {
    std::array<double, ParamVector::dim> a;
    Eigen::Map<Eigen::VectorXd>(a.data(), ParamVector::dim) = x;
    try {
      return total_loglik(ParamVector::from_array(a), ds, lik_cfg, proj_cfg);
    } catch (const NumericalError&) {
      return kNegInf;  // overflowing draws are inadmissible, not fatal
    }
  };
  target.prior_scale =
      Eigen::Map<const Eigen::VectorXd>(prior.sd.data(), ParamVector::dim);
  return target;
}

WeightedEnsemble imis_fit(const AreaDataset& ds, const IndependentPrior& prior,
                          const LikelihoodConfig& lik_cfg, const ImisConfig& cfg,
                          const ProjectionConfig& proj_cfg) {
  validate(ds);
  return imis_fit(epidemic_target(ds, prior, lik_cfg, proj_cfg), cfg);
}

std::vector<int> resample_indices(const Eigen::VectorXd& log_weights, int n,
                                  std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("resample size must be >= 1");
  const auto m = log_weights.size();
  std::vector<double> cdf(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    acc += std::exp(log_weights[i]);
    cdf[i] = acc;
  }
  cdf[m - 1] = 1.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> idx(n);
  for (int k = 0; k < n; ++k) {
    const double u = unif(rng);
    idx[k] = static_cast<int>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return idx;
}

std::vector<ParamVector> resample(const WeightedEnsemble& ens, int n,
                                  std::uint64_t seed) {
  const auto idx = resample_indices(ens.log_weights, n, seed);
  std::vector<ParamVector> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(ens.param(i));
  return out;
}

}  // namespace eppool
