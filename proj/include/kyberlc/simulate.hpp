#pragma once

// Monte Carlo harness: decoding-noise sampling through the full pipeline,
// moment and tail diagnostics, round-trip campaigns, and a stress mode that
// inflates the rounding noise to exercise the correction paths.

#include "kyberlc/analysis.hpp"
#include "kyberlc/pipeline.hpp"

namespace kyberlc {

struct NoiseSampleSet {
  std::vector<int> samples; // centered coefficients, trial-major
  int per_trial = 0;        // coefficients contributed by one trial
  int trials = 0;
  std::string config;

  long long count() const { return static_cast<long long>(samples.size()); }
};

// Fresh keys and encryption per trial; samples are the centered residuals
// y - w of all 256 coefficients.
NoiseSampleSet sample_noise(const EncoderConfig& cfg, int trials, const Seed& seed);

// e^T r + e2 - s^T e1 from raw sampled terms, compression bypassed.
NoiseSampleSet sample_uncompressed_noise(const ParamSet& params, int trials,
                                         const Seed& seed);

// e^T r alone, for the product-distribution checks.
NoiseSampleSet sample_product_noise(const ParamSet& params, int trials,
                                    const Seed& seed);

struct DiagnosticsReport {
  long long count = 0;
  double variance = 0;
  double normalized_variance = 0; // variance / round(q/2)^2
  double skewness = 0;
  double excess_kurtosis = 0;
  // |x| thresholds exceeded with empirical frequency ~= p, p = 1e-1 .. 1e-4
  std::vector<std::pair<double, double>> quantiles;
};
DiagnosticsReport diagnostics(const NoiseSampleSet& s);

// frequency of ||block of ell consecutive coefficients|| > z, whole blocks
// within each trial only
double empirical_tail(const NoiseSampleSet& s, int ell, double z);

// normalized lag autocorrelation within trials
double autocorrelation(const NoiseSampleSet& s, int lag);

// covariance estimate between coordinates i and j across trials
double coefficient_covariance(const NoiseSampleSet& s, int i, int j);

struct CampaignResult {
  int trials = 0;
  int failures = 0;              // decoded message != sent message
  long long raw_block_errors = 0; // lattice blocks decoded wrong, pre outer code
  long long raw_bit_errors = 0;
  long long blocks_total = 0;
  long long corrected_total = 0; // outer-code corrections spent (BICM)
  int corrected_max = 0;
  int recovered_with_corrections = 0; // trials saved by the outer code
};

CampaignResult roundtrip_campaign(const EncoderConfig& cfg, int trials,
                                  const Seed& seed);

// Same campaign with the v-compression depth lowered (harness-only override)
// so raw block errors actually occur at desk scale.
CampaignResult stress_campaign(const EncoderConfig& cfg, int d_v_override,
                               int trials, const Seed& seed);

} // namespace kyberlc
