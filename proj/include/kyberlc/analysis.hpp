#pragma once

// Closed-form noise and failure-rate engine: exact rounding-noise variance
// by enumeration, the Gaussian-variance formula, a log-domain generalized
// Marcum-Q evaluator good down past 2^-900, failure-rate estimates for the
// threshold and lattice decoders, and ciphertext-expansion accounting.

#include <string>

#include "kyberlc/lattice.hpp"
#include "kyberlc/pke.hpp"

namespace kyberlc {

// Exact fraction with normalized sign and gcd.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);
  Rational(long long n) : num(n), den(1) {}

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  bool operator==(const Rational&) const = default;

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Exact variance of x - Decompress(Compress(x, d), d) mod+- q over uniform
// x in Z_q, by full enumeration.
Rational var_psi(int d);

// Reference rounding-noise variances the published failure-rate tables are
// defined against; the enumerated values differ slightly at d = 9 and 8.
Rational reference_var_psi(int d);

enum class VarPsiSource { enumerated, reference };
Rational var_psi_from(int d, VarPsiSource src);

int uniform_half_width(int d_v);      // round(q / 2^(d_v+1))
Rational uniform_variance(int d_v);   // Var U(-half .. half)

// sigma_G^2 = k n eta1^2/4 + k n eta1/2 (eta2/2 + var_psi_du) + eta2/2
Rational sigma_g2(const ParamSet& params, const Rational& var_psi_du);

struct NoiseModel {
  double sigma_g2 = 0;
  int u_half = 0;
  double var_psi_du = 0;
  double normalized_var = 0; // (sigma_G^2 + uniform variance) / round(q/2)^2
};
NoiseModel noise_model(const ParamSet& params, VarPsiSource src);

// log2 of the regularized upper incomplete gamma Q(s, x).
double gamma_upper_reg_log2(double s, double x);

// log2 of the Gaussian tail Q(t).
double gaussian_q_log2(double t);

// log2 Q_M(a, b), M = l/2 >= 1/2, via the Poisson mixture of central
// chi-square tails; truncated when the remaining Poisson mass is below
// 2^-1000.  Throws if the series fails to converge within budget.
double marcum_q_log2(double order_m, double a, double b);

// log2 of the per-coefficient threshold-decoder failure bound
// 1 - (1 - 2 Q((round(q/4) - u_half)/sigma_G))^n.
double dfr_original_bound(const ParamSet& params);

// log2 of sum over blocks of Q_{l/2}(sqrt(l) u_half / sigma_G,
// lambda(p) / (2 sigma_G)); the u-compression depth comes from
// params.d_u_hat.
double dfr_lattice(const ParamSet& params, const BlockSchedule& schedule,
                   VarPsiSource src);

// log2 of C(N, t+1) (delta / N)^(t+1) with delta recomputed at d_u_hat.
double dfr_bicm(const ParamSet& params, int t, int d_u_hat, VarPsiSource src);

// log2 Pr(||n_e^(l)|| > z) <= log2 Q_{l/2}(sqrt(l) u_half/sigma_G, z/sigma_G)
double tail_bound_log2(int ell, double z, const NoiseModel& model);

struct CerMetrics {
  Rational cer;         // original ciphertext bits / plaintext bits
  Rational cer_reduced; // with the selected encoder
  Rational cer_r;       // 1 - reduced/original
  int bits_per_block = 0;
  int n_bits = 0;       // N, information bits per ciphertext
};

// encoder: "int", "bw16", "leech" (fixed ciphertext, larger payload) or
// "bicm" (fixed 256-bit payload, u recompressed to params.d_u_hat).
CerMetrics cer_metrics(const ParamSet& params, const std::string& encoder);

} // namespace kyberlc
