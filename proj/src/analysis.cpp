#include "kyberlc/analysis.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace kyberlc {

namespace {

constexpr double kLn2 = 0.6931471805599453;

long long mul_checked(long long a, long long b) {
  __int128 p = static_cast<__int128>(a) * b;
  if (p > (__int128)0x7fffffffffffffffLL || p < -(__int128)0x7fffffffffffffffLL)
    throw std::overflow_error("rational arithmetic overflow");
  return static_cast<long long>(p);
}

} // namespace

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(std::abs(num), den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::operator+(const Rational& o) const {
  return {mul_checked(num, o.den) + mul_checked(o.num, den), mul_checked(den, o.den)};
}
Rational Rational::operator-(const Rational& o) const {
  return {mul_checked(num, o.den) - mul_checked(o.num, den), mul_checked(den, o.den)};
}
Rational Rational::operator*(const Rational& o) const {
  return {mul_checked(num, o.num), mul_checked(den, o.den)};
}

Rational var_psi(int d) {
  if (d < 1 || (1 << d) >= kQ)
    throw std::invalid_argument("var_psi: need 2^d < q");
  long long sum = 0, sum2 = 0;
  for (int x = 0; x < kQ; ++x) {
    int e = center_mod_q(x - decompress(compress(x, d), d));
    sum += e;
    sum2 += static_cast<long long>(e) * e;
  }
  // Var = E[psi^2] - E[psi]^2 = (q sum2 - sum^2) / q^2
  return {kQ * sum2 - sum * sum, static_cast<long long>(kQ) * kQ};
}

Rational reference_var_psi(int d) {
  switch (d) {
    case 11: return {38, 100};
    case 10: return {9, 10};
    case 9: return {38, 10};
    case 8: return {141, 10};
  }
  throw std::invalid_argument("no reference variance for this depth");
}

Rational var_psi_from(int d, VarPsiSource src) {
  return src == VarPsiSource::enumerated ? var_psi(d) : reference_var_psi(d);
}

int uniform_half_width(int d_v) {
  return static_cast<int>(div_round_ties_up(kQ, 1LL << (d_v + 1)));
}

Rational uniform_variance(int d_v) {
  long long w = 2 * uniform_half_width(d_v) + 1;
  return {w * w - 1, 12};
}

Rational sigma_g2(const ParamSet& params, const Rational& var_psi_du) {
  const long long k = params.k, n = kN, e1 = params.eta1, e2 = params.eta2;
  Rational first{k * n * e1 * e1, 4};
  Rational mid = Rational{k * n * e1, 2} * (Rational{e2, 2} + var_psi_du);
  return first + mid + Rational{e2, 2};
}

NoiseModel noise_model(const ParamSet& params, VarPsiSource src) {
  NoiseModel m;
  Rational vp = var_psi_from(params.d_u_hat, src);
  Rational sg2 = sigma_g2(params, vp);
  m.sigma_g2 = sg2.to_double();
  m.u_half = uniform_half_width(params.d_v);
  m.var_psi_du = vp.to_double();
  const double half_q = static_cast<double>(payload_scale(2));
  m.normalized_var = (sg2 + uniform_variance(params.d_v)).to_double() / (half_q * half_q);
  return m;
}

// ---- log-domain incomplete gamma and Marcum Q ------------------------------

double gamma_upper_reg_log2(double s, double x) {
  if (s <= 0 || x < 0) throw std::invalid_argument("gamma_upper_reg_log2: bad arguments");
  if (x == 0) return 0.0;

  if (x < s + 1) {
    // lower series: P(s,x) = x^s e^-x / Gamma(s+1) * sum_k x^k / ((s+1)..(s+k))
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 100000; ++k) {
      term *= x / (s + k);
      sum += term;
      if (term < sum * 1e-18) break;
    }
    double log_p = s * std::log(x) - x - std::lgamma(s + 1) + std::log(sum);
    if (log_p < -45 * kLn2) return -std::exp(log_p) / kLn2; // Q = 1 - eps
    double p = std::exp(log_p);
    if (p >= 1.0) p = 1.0 - 1e-16;
    return std::log1p(-p) / kLn2;
  }

  // continued fraction (modified Lentz) for the upper function
  const double tiny = 1e-300;
  double b = x + 1 - s, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    double an = -static_cast<double>(i) * (i - s);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17)
      return (-x + s * std::log(x) + std::log(h) - std::lgamma(s)) / kLn2;
  }
  throw std::runtime_error("gamma_upper_reg_log2: continued fraction stalled");
}

double gaussian_q_log2(double t) {
  if (t <= 0) return std::log2(0.5 * std::erfc(t / std::sqrt(2.0)));
  return gamma_upper_reg_log2(0.5, t * t / 2) - 1.0;
}

double marcum_q_log2(double order_m, double a, double b) {
  if (order_m < 0.5 || a < 0 || b < 0)
    throw std::invalid_argument("marcum_q_log2: bad arguments");
  if (b == 0) return 0.0;
  const double lam = a * a / 2, x = b * b / 2;
  if (lam == 0) return gamma_upper_reg_log2(order_m, x);

  const double log2_lam = std::log2(lam);
  double max_term = -std::numeric_limits<double>::infinity();
  double scaled_sum = 0;
  const long budget = 4000000;
  for (long j = 0; j < budget; ++j) {
    double log2_pois = (-lam - std::lgamma(j + 1.0)) / kLn2 + j * log2_lam;
    double term = log2_pois + gamma_upper_reg_log2(order_m + j, x);
    if (term > max_term) {
      scaled_sum = scaled_sum * std::exp2(max_term - term) + 1.0;
      max_term = term;
    } else {
      scaled_sum += std::exp2(term - max_term);
    }
    // past the Poisson mode the weights decay geometrically; remaining mass
    // is below ~2 * pois(j) once j > 2 lam
    if (j > 2 * lam + 8 && log2_pois < -1010) return max_term + std::log2(scaled_sum);
  }
  throw std::runtime_error("marcum_q_log2: series did not converge in budget");
}

// ---- failure-rate estimates -------------------------------------------------

double dfr_original_bound(const ParamSet& params) {
  NoiseModel m = noise_model(params, VarPsiSource::enumerated);
  const double sigma = std::sqrt(m.sigma_g2);
  const double thr = static_cast<double>(div_round_ties_up(kQ, 4)); // 832
  const double lq = gaussian_q_log2((thr - m.u_half) / sigma);
  if (lq < -500) return std::log2(2.0 * kN) + lq; // 1-(1-2Q)^n ~ 2nQ
  const double q = std::exp2(lq);
  return std::log2(-std::expm1(kN * std::log1p(-2 * q)));
}

namespace {

double log2_sum(double acc, double term) {
  if (std::isinf(acc)) return term;
  double hi = std::max(acc, term), lo = std::min(acc, term);
  return hi + std::log2(1.0 + std::exp2(lo - hi));
}

} // namespace

double dfr_lattice(const ParamSet& params, const BlockSchedule& schedule,
                   VarPsiSource src) {
  NoiseModel m = noise_model(params, src);
  const double sigma = std::sqrt(m.sigma_g2);
  double acc = -std::numeric_limits<double>::infinity();
  for (const auto& part : schedule.parts) {
    const LatticeCode& code = *part.code;
    const double lambda =
        payload_scale(code.p) * std::sqrt(static_cast<double>(code.lambda2));
    const double a = std::sqrt(static_cast<double>(code.ell)) * m.u_half / sigma;
    const double b = lambda / (2 * sigma);
    double term = marcum_q_log2(code.ell / 2.0, a, b) + std::log2(double(part.count));
    acc = log2_sum(acc, term);
  }
  return acc;
}

double dfr_bicm(const ParamSet& params, int t, int d_u_hat, VarPsiSource src) {
  const ParamSet at_hat = params.with_du_hat(d_u_hat);
  const BlockSchedule schedule = bw16_schedule();
  const double delta_log2 = dfr_lattice(at_hat, schedule, src);
  const double n_bits = schedule.bits();
  // log2 C(N, t+1)
  double log2_binom = (std::lgamma(n_bits + 1) - std::lgamma(t + 2.0) -
                       std::lgamma(n_bits - t)) / kLn2;
  return log2_binom + (t + 1) * (delta_log2 - std::log2(n_bits));
}

double tail_bound_log2(int ell, double z, const NoiseModel& model) {
  if (z < 0) throw std::invalid_argument("tail_bound_log2: need z >= 0");
  const double sigma = std::sqrt(model.sigma_g2);
  const double a = std::sqrt(static_cast<double>(ell)) * model.u_half / sigma;
  return std::min(0.0, marcum_q_log2(ell / 2.0, a, z / sigma));
}

CerMetrics cer_metrics(const ParamSet& params, const std::string& encoder) {
  CerMetrics out;
  const long long ct_bits = static_cast<long long>(params.k) * kN * params.d_u +
                            static_cast<long long>(kN) * params.d_v;
  out.cer = {ct_bits, kN};

  if (encoder == "int" || encoder == "bw16" || encoder == "leech") {
    BlockSchedule s = encoder == "int" ? integer_schedule()
                      : encoder == "bw16" ? bw16_schedule()
                                          : leech_schedule();
    out.n_bits = s.bits();
    out.bits_per_block = s.parts[0].code->bits_per_block;
    out.cer_reduced = {ct_bits, out.n_bits};
    out.cer_r = Rational{1} - Rational{kN, out.n_bits};
  } else if (encoder == "bicm") {
    const long long hat_bits = static_cast<long long>(params.k) * kN * params.d_u_hat +
                               static_cast<long long>(kN) * params.d_v;
    out.n_bits = 256;
    out.bits_per_block = bw16_code().bits_per_block;
    out.cer_reduced = {hat_bits, kN};
    out.cer_r = Rational{1} - Rational{hat_bits, ct_bits};
  } else {
    throw std::invalid_argument("cer_metrics: unknown encoder " + encoder);
  }
  return out;
}

} // namespace kyberlc
