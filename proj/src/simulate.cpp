#include "kyberlc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kyberlc {

namespace {

constexpr std::uint8_t kLabelKeygen = 0xa0;
constexpr std::uint8_t kLabelEncrypt = 0xa1;
constexpr std::uint8_t kLabelMessage = 0xa2;

BitVec random_payload(const Seed& seed, std::uint64_t trial, int nbits) {
  XofStream xs(seed, kLabelMessage, trial);
  BitVec bits(nbits);
  int have = 0;
  std::uint8_t byte = 0;
  for (auto& b : bits) {
    if (have == 0) {
      byte = xs.u8();
      have = 8;
    }
    b = byte & 1;
    byte >>= 1;
    --have;
  }
  return bits;
}

} // namespace

NoiseSampleSet sample_noise(const EncoderConfig& cfg, int trials, const Seed& seed) {
  if (trials < 1) throw std::invalid_argument("sample_noise: trials must be >= 1");
  NoiseSampleSet out;
  out.per_trial = kN;
  out.trials = trials;
  out.config = cfg.params.name + "/" + encoder_name(cfg.kind);
  out.samples.reserve(static_cast<std::size_t>(trials) * kN);
  for (int t = 0; t < trials; ++t) {
    KeyPair kp = keygen(cfg.params, derive_seed(seed, kLabelKeygen, t));
    BitVec bits = random_payload(seed, t, cfg.payload_bits());
    EncryptResult enc =
        pipeline_encrypt(kp.pk, bits, cfg, derive_seed(seed, kLabelEncrypt, t));
    RingElem y = decrypt_raw(kp.sk, enc.ct);
    for (int i = 0; i < kN; ++i)
      out.samples.push_back(center_mod_q(y.c[i] - enc.w.c[i]));
  }
  return out;
}

NoiseSampleSet sample_uncompressed_noise(const ParamSet& params, int trials,
                                         const Seed& seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  NoiseSampleSet out;
  out.per_trial = kN;
  out.trials = trials;
  out.config = params.name + "/uncompressed";
  out.samples.reserve(static_cast<std::size_t>(trials) * kN);
  for (int t = 0; t < trials; ++t) {
    auto kr = expand_key_randomness(params, derive_seed(seed, kLabelKeygen, t));
    auto er = expand_enc_randomness(params, derive_seed(seed, kLabelEncrypt, t));
    RingElem n = poly_sub(poly_add(inner_product(kr.e, er.r), er.e2),
                          inner_product(kr.s, er.e1));
    for (int i = 0; i < kN; ++i) out.samples.push_back(center_mod_q(n.c[i]));
  }
  return out;
}

NoiseSampleSet sample_product_noise(const ParamSet& params, int trials,
                                    const Seed& seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  NoiseSampleSet out;
  out.per_trial = kN;
  out.trials = trials;
  out.config = params.name + "/product";
  out.samples.reserve(static_cast<std::size_t>(trials) * kN);
  for (int t = 0; t < trials; ++t) {
    auto kr = expand_key_randomness(params, derive_seed(seed, kLabelKeygen, t));
    auto er = expand_enc_randomness(params, derive_seed(seed, kLabelEncrypt, t));
    RingElem n = inner_product(kr.e, er.r);
    for (int i = 0; i < kN; ++i) out.samples.push_back(center_mod_q(n.c[i]));
  }
  return out;
}

DiagnosticsReport diagnostics(const NoiseSampleSet& s) {
  DiagnosticsReport r;
  r.count = s.count();
  if (r.count == 0) return r;
  double n = static_cast<double>(r.count);
  double mean = 0;
  for (int v : s.samples) mean += v;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (int v : s.samples) {
    double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  r.variance = m2;
  const double half_q = static_cast<double>(payload_scale(2));
  r.normalized_variance = m2 / (half_q * half_q);
  r.skewness = m3 / std::pow(m2, 1.5);
  r.excess_kurtosis = m4 / (m2 * m2) - 3.0;

  std::vector<int> mags;
  mags.reserve(s.samples.size());
  for (int v : s.samples) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end());
  for (double p : {1e-1, 1e-2, 1e-3, 1e-4}) {
    auto idx = static_cast<std::size_t>((1.0 - p) * (mags.size() - 1));
    r.quantiles.emplace_back(p, static_cast<double>(mags[idx]));
  }
  return r;
}

double empirical_tail(const NoiseSampleSet& s, int ell, double z) {
  if (ell < 1 || ell > s.per_trial)
    throw std::invalid_argument("empirical_tail: bad block length");
  const double z2 = z * z;
  long long blocks = 0, over = 0;
  for (int t = 0; t < s.trials; ++t) {
    const int* base = s.samples.data() + static_cast<std::size_t>(t) * s.per_trial;
    for (int b = 0; b + ell <= s.per_trial; b += ell) {
      double n2 = 0;
      for (int i = 0; i < ell; ++i)
        n2 += static_cast<double>(base[b + i]) * base[b + i];
      ++blocks;
      over += n2 > z2 ? 1 : 0;
    }
  }
  return blocks ? static_cast<double>(over) / static_cast<double>(blocks) : 0.0;
}

double autocorrelation(const NoiseSampleSet& s, int lag) {
  if (lag < 1 || lag >= s.per_trial)
    throw std::invalid_argument("autocorrelation: bad lag");
  double num = 0, den = 0;
  long long pairs = 0;
  for (int t = 0; t < s.trials; ++t) {
    const int* base = s.samples.data() + static_cast<std::size_t>(t) * s.per_trial;
    for (int i = 0; i + lag < s.per_trial; ++i) {
      num += static_cast<double>(base[i]) * base[i + lag];
      ++pairs;
    }
  }
  for (int v : s.samples) den += static_cast<double>(v) * v;
  den /= static_cast<double>(s.count());
  return num / (static_cast<double>(pairs) * den);
}

double coefficient_covariance(const NoiseSampleSet& s, int i, int j) {
  if (i < 0 || j < 0 || i >= s.per_trial || j >= s.per_trial)
    throw std::invalid_argument("coefficient_covariance: bad coordinates");
  double mi = 0, mj = 0;
  for (int t = 0; t < s.trials; ++t) {
    const int* base = s.samples.data() + static_cast<std::size_t>(t) * s.per_trial;
    mi += base[i];
    mj += base[j];
  }
  mi /= s.trials;
  mj /= s.trials;
  double acc = 0;
  for (int t = 0; t < s.trials; ++t) {
    const int* base = s.samples.data() + static_cast<std::size_t>(t) * s.per_trial;
    acc += (base[i] - mi) * (base[j] - mj);
  }
  return acc / s.trials;
}

namespace {

// transmitted raw code bits for the configured encoder (the lattice-level
// word, after any outer code and interleaving)
BitVec raw_tx_bits(const EncoderConfig& cfg, const BitVec& payload) {
  if (cfg.kind != EncoderKind::bicm) return payload;
  BitVec padded = payload;
  padded.push_back(0);
  BitVec coded = BchCode::instance().encode(padded);
  if (cfg.bicm->identity_interleaver) return coded;
  return interleave(coded,
                    make_interleaver(cfg.bicm->interleaver_seed, BchCode::kN));
}

} // namespace

CampaignResult roundtrip_campaign(const EncoderConfig& cfg, int trials,
                                  const Seed& seed) {
  if (trials < 1) throw std::invalid_argument("campaign: trials must be >= 1");
  CampaignResult res;
  res.trials = trials;
  for (int t = 0; t < trials; ++t) {
    KeyPair kp = keygen(cfg.params, derive_seed(seed, kLabelKeygen, t));
    BitVec bits = random_payload(seed, t, cfg.payload_bits());
    EncryptResult enc =
        pipeline_encrypt(kp.pk, bits, cfg, derive_seed(seed, kLabelEncrypt, t));
    DecryptResult dec = pipeline_decrypt(enc.ct, kp.sk, cfg);

    const bool ok = !dec.failed && dec.bits == bits;
    res.failures += ok ? 0 : 1;

    // lattice-level error accounting against the transmitted code bits
    BitVec tx = raw_tx_bits(cfg, bits);
    BitVec rx = schedule_decode(cfg.schedule, decrypt_raw(kp.sk, enc.ct));
    int pos = 0;
    for (const auto& part : cfg.schedule.parts) {
      for (int blk = 0; blk < part.count; ++blk) {
        bool block_bad = false;
        for (int b = 0; b < part.code->bits_per_block; ++b, ++pos) {
          if (tx[pos] != rx[pos]) {
            ++res.raw_bit_errors;
            block_bad = true;
          }
        }
        res.raw_block_errors += block_bad ? 1 : 0;
        ++res.blocks_total;
      }
    }
    res.corrected_total += dec.corrected;
    res.corrected_max = std::max(res.corrected_max, dec.corrected);
    res.recovered_with_corrections += (ok && dec.corrected > 0) ? 1 : 0;
  }
  return res;
}

CampaignResult stress_campaign(const EncoderConfig& cfg, int d_v_override,
                               int trials, const Seed& seed) {
  EncoderConfig stress = cfg;
  stress.params.d_v = d_v_override;
  if (stress.bicm) stress.bicm->params.d_v = d_v_override;
  return roundtrip_campaign(stress, trials, seed);
}

} // namespace kyberlc
