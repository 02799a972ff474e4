#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "eppool/imis.hpp"
#include "test_support.hpp"

using namespace eppool;
using eppool::testing::normal_pdf;
using eppool::testing::simpson;

namespace {

// Conjugate normal-mean toy: prior N(0, prior_sd^2 I), likelihood of a
// single observation y with known noise SD per coordinate.
ImisTarget gaussian_toy(const Eigen::VectorXd& y, double prior_sd, double noise_sd) {
  ImisTarget t;
  t.dim = static_cast<int>(y.size());
  t.prior_scale = Eigen::VectorXd::Constant(t.dim, prior_sd);
  t.sample_prior = [dim = t.dim, prior_sd](std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, prior_sd);
    Eigen::VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x[j] = gauss(rng);
    return x;
  };
  t.log_prior = [prior_sd](const Eigen::VectorXd& x) {
    double lp = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      lp += std::log(normal_pdf(x[j], 0.0, prior_sd));
    return lp;
  };
  t.log_lik = [y, noise_sd](const Eigen::VectorXd& x) {
    double ll = 0.0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
      ll += std::log(normal_pdf(y[j], x[j], noise_sd));
    return ll;
  };
  return t;
}

double weighted_mean(const WeightedEnsemble& ens, int j) {
  return (ens.log_weights.array().exp() * ens.samples.col(j).array()).sum();
}

double weighted_var(const WeightedEnsemble& ens, int j) {
  const double m = weighted_mean(ens, j);
  return (ens.log_weights.array().exp() *
          (ens.samples.col(j).array() - m).square())
      .sum();
}

}  // namespace

TEST_CASE("constant likelihood keeps the prior: uniform weights, no iterations") {
  Eigen::VectorXd y(2);
  y << 0.0, 0.0;
  ImisTarget t = gaussian_toy(y, 1.0, 1.0);
  t.log_lik = [](const Eigen::VectorXd&) { return -1.23; };
  ImisConfig cfg;
  cfg.n_initial = 2000;
  cfg.rng_seed = 1;
  const auto ens = imis_fit(t, cfg);
  CHECK(ens.diagnostics.iterations == 0);
  CHECK(ens.size() == 2000);
  for (int i = 0; i < ens.size(); ++i)
    CHECK(ens.log_weights[i] == doctest::Approx(-std::log(2000.0)).epsilon(1e-12));
}

TEST_CASE("all-impossible likelihood raises a no-admissible-draws error") {
  Eigen::VectorXd y(1);
  y << 0.0;
  ImisTarget t = gaussian_toy(y, 1.0, 1.0);
  t.log_lik = [](const Eigen::VectorXd&) {
    return -std::numeric_limits<double>::infinity();
  };
  ImisConfig cfg;
  cfg.n_initial = 100;
  CHECK_THROWS_AS(imis_fit(t, cfg), SamplerError);
}

TEST_CASE("conjugate 2-D Gaussian posterior is recovered") {
  const double prior_sd = 2.0, noise_sd = 0.5;
  Eigen::VectorXd y(2);
  y << 1.5, -0.8;
  // Posterior per coordinate: N(y * k, noise^2 * k) with k = s0^2/(s0^2+s^2).
  const double shrink = prior_sd * prior_sd / (prior_sd * prior_sd + noise_sd * noise_sd);
  const double post_var = noise_sd * noise_sd * shrink;

  ImisConfig cfg;
  cfg.n_initial = 3000;
  cfg.n_per_iter = 300;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.rng_seed = seed;
    const auto ens = imis_fit(gaussian_toy(y, prior_sd, noise_sd), cfg);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(weighted_mean(ens, j) - y[j] * shrink) < 0.05 * prior_sd);
      CHECK(weighted_var(ens, j) == doctest::Approx(post_var).epsilon(0.10));
    }
  }
}

TEST_CASE("bimodal 1-D posterior keeps both modes with the right mass split") {
  const double prior_sd = 5.0;
  ImisTarget t;
  t.dim = 1;
  t.prior_scale = Eigen::VectorXd::Constant(1, prior_sd);
  t.sample_prior = [prior_sd](std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, prior_sd);
    Eigen::VectorXd x(1);
    x[0] = gauss(rng);
    return x;
  };
  t.log_prior = [prior_sd](const Eigen::VectorXd& x) {
    return std::log(normal_pdf(x[0], 0.0, prior_sd));
  };
  auto lik = [](double x) {
    return 0.7 * normal_pdf(x, -2.0, 0.3) + 0.3 * normal_pdf(x, 2.0, 0.3);
  };
  t.log_lik = [lik](const Eigen::VectorXd& x) { return std::log(lik(x[0])); };

  // Posterior mass below zero by quadrature.
  const double prior_sd_c = prior_sd;
  auto post = [&](double x) { return lik(x) * normal_pdf(x, 0.0, prior_sd_c); };
  const double mass_left = simpson(post, -20.0, 0.0, 20000);
  const double mass_right = simpson(post, 0.0, 20.0, 20000);
  const double true_ratio = mass_left / (mass_left + mass_right);

  ImisConfig cfg;
  cfg.n_initial = 5000;
  cfg.n_per_iter = 500;
  cfg.rng_seed = 99;
  const auto ens = imis_fit(t, cfg);
  double left = 0.0;
  for (int i = 0; i < ens.size(); ++i)
    if (ens.samples(i, 0) < 0.0) left += std::exp(ens.log_weights[i]);
  CHECK(std::abs(left - true_ratio) / true_ratio < 0.10);
}

TEST_CASE("self-normalized estimate of a constant is exact") {
  Eigen::VectorXd y(2);
  y << 0.7, 0.1;
  ImisConfig cfg;
  cfg.n_initial = 1000;
  cfg.n_per_iter = 200;
  cfg.rng_seed = 5;
  const auto ens = imis_fit(gaussian_toy(y, 1.5, 0.4), cfg);
  CHECK(ens.log_weights.array().exp().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ESS does not decrease across iterations in expectation (20 seeds)") {
  Eigen::VectorXd y(2);
  y << 2.5, -2.5;  // far enough out that iterations actually fire
  double first = 0.0, last = 0.0;
  int with_iterations = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ImisConfig cfg;
    cfg.n_initial = 1500;
    cfg.n_per_iter = 300;
    cfg.rng_seed = seed;
    cfg.stop_max_weight = 0.01;
    const auto ens = imis_fit(gaussian_toy(y, 3.0, 0.3), cfg);
    const auto& hist = ens.diagnostics.ess_history;
    REQUIRE(!hist.empty());
    if (hist.size() > 1) ++with_iterations;
    first += hist.front();
    last += hist.back();
  }
  CHECK(with_iterations > 0);
  CHECK(last >= first);
}

TEST_CASE("identical seed and inputs give a bit-identical ensemble") {
  Eigen::VectorXd y(2);
  y << 1.0, 0.5;
  ImisConfig cfg;
  cfg.n_initial = 800;
  cfg.n_per_iter = 150;
  cfg.rng_seed = 31415;
  const auto a = imis_fit(gaussian_toy(y, 2.0, 0.5), cfg);
  const auto b = imis_fit(gaussian_toy(y, 2.0, 0.5), cfg);
  REQUIRE(a.size() == b.size());
  CHECK(a.samples == b.samples);
  CHECK(a.log_weights == b.log_weights);
  CHECK(a.loglik == b.loglik);
  CHECK(a.sampler_logdensity == b.sampler_logdensity);
}

TEST_CASE("every stored sample clears the weight threshold") {
  Eigen::VectorXd y(2);
  y << 1.5, -0.8;
  ImisConfig cfg;
  cfg.n_initial = 3000;
  cfg.n_per_iter = 300;
  cfg.rng_seed = 77;
  const auto ens = imis_fit(gaussian_toy(y, 2.0, 0.5), cfg);
  for (int i = 0; i < ens.size(); ++i)
    CHECK(std::exp(ens.log_weights[i]) > 1e-7);  // renormalized floor
  CHECK(ens.diagnostics.n_stored == ens.size());
  CHECK(ens.diagnostics.n_evaluated >= ens.size());
}

TEST_CASE("resampling a single-sample ensemble copies it n times") {
  WeightedEnsemble ens;
  ens.samples = Eigen::MatrixXd::Zero(1, ParamVector::dim);
  ens.samples(0, 0) = 1981.0;
  ens.log_weights = Eigen::VectorXd::Zero(1);
  ens.loglik = Eigen::VectorXd::Zero(1);
  ens.sampler_logdensity = Eigen::VectorXd::Zero(1);
  const auto draws = resample(ens, 7, 1);
  REQUIRE(draws.size() == 7);
  for (const auto& d : draws) CHECK(d.t0 == 1981.0);
}

TEST_CASE("uniform weights resample uniformly (chi-square at 1%)") {
  const int m = 20, n = 100000;
  const Eigen::VectorXd log_w =
      Eigen::VectorXd::Constant(m, -std::log(static_cast<double>(m)));
  const auto idx = resample_indices(log_w, n, 12345);
  std::vector<int> counts(m, 0);
  for (int i : idx) ++counts[i];
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / m;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 36.19);  // chi-square(19) 1% critical value
}

TEST_CASE("0.9/0.1 weights give first-sample frequency 0.9 within CI") {
  Eigen::VectorXd log_w(2);
  log_w << std::log(0.9), std::log(0.1);
  const int n = 100000;
  const auto idx = resample_indices(log_w, n, 321);
  int first = 0;
  for (int i : idx)
    if (i == 0) ++first;
  CHECK(std::abs(first / static_cast<double>(n) - 0.9) < 0.005);
}

TEST_CASE("resample is deterministic per seed") {
  Eigen::VectorXd log_w(3);
  log_w << std::log(0.5), std::log(0.3), std::log(0.2);
  CHECK(resample_indices(log_w, 50, 9) == resample_indices(log_w, 50, 9));
  CHECK(resample_indices(log_w, 50, 9) != resample_indices(log_w, 50, 10));
}
