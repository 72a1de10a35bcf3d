#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kyberlc/simulate.hpp"

using namespace kyberlc;

namespace {

Seed test_seed(std::uint8_t fill) {
  Seed s;
  s.fill(fill);
  return s;
}

EncoderConfig int_config(int bits) {
  const ParamSet& p = param_set(bits);
  return make_encoder_config(EncoderKind::integer, p, p.d_u, test_seed(0));
}

} // namespace

TEST_CASE("identical master seeds reproduce samples and campaign outcomes") {
  auto cfg = int_config(512);
  auto a = sample_noise(cfg, 5, test_seed(1));
  auto b = sample_noise(cfg, 5, test_seed(1));
  CHECK_EQ(a.samples, b.samples);
  auto c = sample_noise(cfg, 5, test_seed(2));
  CHECK_NE(c.samples, a.samples);

  auto r1 = roundtrip_campaign(cfg, 25, test_seed(3));
  auto r2 = roundtrip_campaign(cfg, 25, test_seed(3));
  CHECK_EQ(r1.failures, r2.failures);
  CHECK_EQ(r1.raw_bit_errors, r2.raw_bit_errors);
}

TEST_CASE("measured decoding-noise variance reproduces the published table") {
  struct Row {
    int bits;
    double expect;
  } rows[] = {{512, 0.0023}, {768, 0.0021}, {1024, 0.0012}};
  for (auto [bits, expect] : rows) {
    auto s = sample_noise(int_config(bits), 40, test_seed(0x5a));
    CHECK_GE(s.count(), 10000);
    double v = diagnostics(s).normalized_variance;
    CHECK_EQ(v, doctest::Approx(expect).epsilon(0.05));
  }
}

TEST_CASE("noise coefficients look independent across lags") {
  auto s = sample_noise(int_config(768), 40, test_seed(0x5a));
  const double limit = 3.0 / std::sqrt(static_cast<double>(s.count()));
  for (int lag = 1; lag <= 8; ++lag)
    CHECK_LT(std::abs(autocorrelation(s, lag)), limit);
}

TEST_CASE("noise statistics do not depend on the payload encoder") {
  const ParamSet& p = kyber768();
  auto a = sample_noise(int_config(768), 12, test_seed(9));
  auto cfg_bw = make_encoder_config(EncoderKind::bw16, p, p.d_u, test_seed(0));
  auto b = sample_noise(cfg_bw, 12, test_seed(9));
  double va = diagnostics(a).variance, vb = diagnostics(b).variance;
  CHECK_EQ(va, doctest::Approx(vb).epsilon(0.08));
}

TEST_CASE("uncompressed noise is normal to the measured moments") {
  const ParamSet& p = kyber768();
  auto s = sample_uncompressed_noise(p, 391, test_seed(0x5a));
  CHECK_GE(s.count(), 100000);
  auto d = diagnostics(s);
  const double expect = p.k * 256.0 * p.eta1 * p.eta1 / 4 +
                        p.k * 256.0 * p.eta1 * p.eta2 / 4 + p.eta2 / 2.0;
  CHECK_EQ(d.variance, doctest::Approx(expect).epsilon(0.05));
  CHECK_LT(std::abs(d.skewness), 0.05);
  CHECK_LT(std::abs(d.excess_kurtosis), 0.1);
}

TEST_CASE("compressed noise carries the uniform component (platykurtic)") {
  auto d = diagnostics(sample_noise(int_config(768), 40, test_seed(0x5a)));
  CHECK_LT(d.excess_kurtosis, 0.0);
  // larger |x| quantiles at smaller tail probabilities
  for (std::size_t i = 1; i < d.quantiles.size(); ++i)
    CHECK_GE(d.quantiles[i].second, d.quantiles[i - 1].second);
}

TEST_CASE("product polynomial matches the predicted covariance structure") {
  const ParamSet& p = kyber768();
  const int trials = 391;
  auto s = sample_product_noise(p, trials, test_seed(0x5a));
  CHECK_GE(s.count(), 100000);
  auto d = diagnostics(s);
  const double expect = p.k * 256.0 * p.eta1 * p.eta1 / 4;
  CHECK_EQ(d.variance, doctest::Approx(expect).epsilon(0.05));

  const double corr_limit = 3.0 / std::sqrt(static_cast<double>(trials));
  for (auto [i, j] : {std::pair{0, 1}, {3, 77}, {12, 200}, {100, 101}})
    CHECK_LT(std::abs(coefficient_covariance(s, i, j)) / d.variance, corr_limit);

  const double ac_limit = 3.0 / std::sqrt(static_cast<double>(s.count()));
  for (int lag = 1; lag <= 8; ++lag)
    CHECK_LT(std::abs(autocorrelation(s, lag)), ac_limit);
}

TEST_CASE("empirical tails: limits and bound validity") {
  auto cfg = make_encoder_config(EncoderKind::bicm, kyber512(), 8, test_seed(0));
  EncoderConfig stress = cfg;
  stress.params.d_v = 3;
  stress.bicm->params.d_v = 3;
  auto s = sample_noise(stress, 400, test_seed(0x5a));

  CHECK_GT(empirical_tail(s, 16, 0), 0.999);
  CHECK_EQ(empirical_tail(s, 16, 1e9), 0.0);
  CHECK_THROWS_AS(empirical_tail(s, 0, 1.0), std::invalid_argument);

  NoiseModel m = noise_model(stress.params, VarPsiSource::enumerated);
  for (double z : {647.0, 882.0, 1000.0}) {
    double emp = empirical_tail(s, 16, z);
    double bound = std::exp2(tail_bound_log2(16, z, m));
    CHECK_LE(emp, bound + 3 * std::sqrt(bound / 6400.0) + 1e-9);
  }
}

TEST_CASE("round-trip campaigns are clean at standard parameters") {
  for (EncoderKind kind : {EncoderKind::integer, EncoderKind::bw16, EncoderKind::leech}) {
    auto cfg = make_encoder_config(kind, kyber768(), kyber768().d_u, test_seed(0));
    auto res = roundtrip_campaign(cfg, 200, test_seed(6));
    CHECK_EQ(res.failures, 0);
    CHECK_EQ(res.raw_block_errors, 0);
    CHECK_EQ(res.raw_bit_errors, 0);
  }
  auto bicm = make_encoder_config(EncoderKind::bicm, kyber512(), 9, test_seed(7));
  auto res = roundtrip_campaign(bicm, 200, test_seed(8));
  CHECK_EQ(res.failures, 0);
  CHECK_EQ(res.corrected_total, 0);
}

TEST_CASE("stress mode surfaces raw block errors and the correction path") {
  auto cfg = make_encoder_config(EncoderKind::bicm, kyber1024(), 8, test_seed(0x33));
  auto res = stress_campaign(cfg, 2, 1500, test_seed(0x5a));

  CHECK_GT(res.raw_block_errors, 0);
  CHECK_GT(res.raw_bit_errors, res.raw_block_errors); // wrong blocks cost several bits
  CHECK_GT(res.recovered_with_corrections, 0);        // the outer code earns its keep
  CHECK_GT(res.failures, 0);                          // and weight > t still breaks
  CHECK_GE(res.corrected_max, 1);
  CHECK_LE(res.corrected_max, 7);
  CHECK_LT(res.failures, res.trials / 2); // stress, not destruction
}
