#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kyberlc/analysis.hpp"
#include "marcum_oracle.hpp"

using namespace kyberlc;

namespace {

// independent enumeration of the rounding-noise variance in doubles
double var_psi_oracle(int d) {
  double sum = 0, sum2 = 0;
  for (int x = 0; x < kQ; ++x) {
    int c = static_cast<int>(std::lround(std::ldexp(static_cast<double>(x), d) / kQ)) % (1 << d);
    int y = static_cast<int>(std::lround(static_cast<double>(kQ) * c / (1 << d)));
    int e = (x - y) % kQ;
    if (e < 0) e += kQ;
    if (e > (kQ - 1) / 2) e -= kQ;
    sum += e;
    sum2 += static_cast<double>(e) * e;
  }
  double mean = sum / kQ;
  return sum2 / kQ - mean * mean;
}

} // namespace

TEST_CASE("var_psi matches an independent enumeration and printed values") {
  CHECK_EQ(var_psi(10).to_double(), doctest::Approx(var_psi_oracle(10)).epsilon(1e-12));
  CHECK_EQ(var_psi(11).to_double(), doctest::Approx(var_psi_oracle(11)).epsilon(1e-12));
  CHECK_EQ(var_psi(9).to_double(), doctest::Approx(var_psi_oracle(9)).epsilon(1e-12));
  CHECK_EQ(var_psi(8).to_double(), doctest::Approx(var_psi_oracle(8)).epsilon(1e-12));

  // printed-precision anchors for the threshold-decoder depths
  CHECK_EQ(std::round(var_psi(10).to_double() * 10) / 10, 0.9);
  CHECK_EQ(std::round(var_psi(11).to_double() * 100) / 100, 0.38);

  // the reference table pins the coarser published inputs at d = 9, 8
  CHECK_EQ(reference_var_psi(9).to_double(), 3.8);
  CHECK_EQ(reference_var_psi(8).to_double(), 14.1);
  CHECK_EQ(var_psi(9).to_double(), doctest::Approx(3.617).epsilon(0.001));
  CHECK_EQ(var_psi(8).to_double(), doctest::Approx(14.0105).epsilon(0.001));

  CHECK_THROWS_AS(var_psi(12), std::invalid_argument);
}

TEST_CASE("var_psi approaches the uniform variance at small depths") {
  for (int d = 1; d <= 4; ++d) {
    double u = uniform_variance(d).to_double();
    double ratio = var_psi(d).to_double() / u;
    CHECK_GT(ratio, 0.85);
    CHECK_LT(ratio, 1.15);
  }
}

TEST_CASE("uniform component: half widths and variances") {
  CHECK_EQ(uniform_half_width(4), 104);
  CHECK_EQ(uniform_half_width(5), 52);
  CHECK_EQ(uniform_variance(4), Rational{3640});
  CHECK_EQ(uniform_variance(5).to_double(), doctest::Approx(918.6667).epsilon(1e-6));
}

TEST_CASE("normalized CLT variances match the published table") {
  CHECK_EQ(noise_model(kyber512(), VarPsiSource::enumerated).normalized_var,
           doctest::Approx(0.0023).epsilon(0.05));
  CHECK_EQ(noise_model(kyber768(), VarPsiSource::enumerated).normalized_var,
           doctest::Approx(0.0021).epsilon(0.05));
  CHECK_EQ(noise_model(kyber1024(), VarPsiSource::enumerated).normalized_var,
           doctest::Approx(0.0012).epsilon(0.05));

  CHECK_LT(std::abs(noise_model(kyber512(), VarPsiSource::enumerated).normalized_var - 0.0023), 1e-4);
  CHECK_LT(std::abs(noise_model(kyber768(), VarPsiSource::enumerated).normalized_var - 0.0021), 1e-4);
  CHECK_LT(std::abs(noise_model(kyber1024(), VarPsiSource::enumerated).normalized_var - 0.0012), 1e-4);
}

TEST_CASE("incomplete gamma: recurrence oracle agreement to 1e-12") {
  for (double x : {0.1, 0.7, 2.0, 5.5, 11.0, 20.0, 30.0}) {
    // half-integer ladder from erfc, integer ladder from exp
    double q_half = std::erfc(std::sqrt(x));
    double q_int = std::exp(-x);
    double s_half = 0.5, s_int = 1.0;
    for (int step = 0; step < 16; ++step) {
      CHECK_EQ(std::exp2(gamma_upper_reg_log2(s_half, x)),
               doctest::Approx(q_half).epsilon(1e-12));
      CHECK_EQ(std::exp2(gamma_upper_reg_log2(s_int, x)),
               doctest::Approx(q_int).epsilon(1e-12));
      q_half += std::exp(s_half * std::log(x) - x - std::lgamma(s_half + 1));
      q_int += std::exp(s_int * std::log(x) - x - std::lgamma(s_int + 1));
      s_half += 1;
      s_int += 1;
    }
  }
}

TEST_CASE("marcum: boundary identities") {
  CHECK_EQ(marcum_q_log2(8, 3.7, 0), 0.0);
  CHECK_EQ(marcum_q_log2(0.5, 0, 2.0),
           doctest::Approx(gamma_upper_reg_log2(0.5, 2.0)).epsilon(1e-14));
  // Q_M(0, b) equals the regularized upper gamma at (M, b^2/2)
  for (double m : {0.5, 1.0, 8.0, 12.0})
    for (double b : {0.5, 2.0, 5.0}) {
      double got = std::exp2(marcum_q_log2(m, 0, b));
      double want = std::exp2(gamma_upper_reg_log2(m, b * b / 2));
      CHECK_EQ(got, doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("marcum vs quadrature oracle at moderate arguments") {
  for (double m : {0.5, 1.0, 2.0, 8.0, 12.0})
    for (double a : {0.5, 2.0, 4.0})
      for (double b : {0.5, 2.0, 6.0, 9.0}) {
        double got = std::exp2(marcum_q_log2(m, a, b));
        double want = marcum_oracle::marcum_q(m, a, b);
        CHECK_EQ(got, doctest::Approx(want).epsilon(1e-8));
      }
}

TEST_CASE("marcum monotone in a, antitone in b") {
  for (double m : {0.5, 8.0}) {
    double prev = -1e300;
    for (double a : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      double v = marcum_q_log2(m, a, 6.0);
      CHECK_GE(v + 1e-12, prev);
      prev = v;
    }
    prev = 1e300;
    for (double b : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      double v = marcum_q_log2(m, 3.0, b);
      CHECK_LE(v - 1e-12, prev);
      prev = v;
    }
  }
}

TEST_CASE("threshold-decoder failure bounds") {
  CHECK_EQ(dfr_original_bound(kyber512()), doctest::Approx(-142).epsilon(0.0072));
  CHECK_EQ(dfr_original_bound(kyber768()), doctest::Approx(-167).epsilon(0.0062));
  CHECK_EQ(dfr_original_bound(kyber1024()), doctest::Approx(-176).epsilon(0.006));
}

TEST_CASE("lattice failure rates reproduce the published table") {
  auto bw = bw16_schedule();
  auto le = leech_schedule();
  const auto src = VarPsiSource::enumerated;
  CHECK_LT(std::abs(dfr_lattice(kyber512(), bw, src) - (-149)), 3);
  CHECK_LT(std::abs(dfr_lattice(kyber768(), bw, src) - (-177)), 3);
  CHECK_LT(std::abs(dfr_lattice(kyber1024(), bw, src) - (-259)), 3);
  CHECK_LT(std::abs(dfr_lattice(kyber512(), le, src) - (-111)), 3);
  CHECK_LT(std::abs(dfr_lattice(kyber768(), le, src) - (-131)), 3);
  CHECK_LT(std::abs(dfr_lattice(kyber1024(), le, src) - (-226)), 3);
}

TEST_CASE("integer-lattice failure rate is consistent with the closed bound") {
  for (const ParamSet* p : {&kyber512(), &kyber768(), &kyber1024()}) {
    double via_lattice = dfr_lattice(*p, integer_schedule(), VarPsiSource::enumerated);
    double via_bound = dfr_original_bound(*p);
    CHECK_LT(std::abs(via_lattice - via_bound), 2.0);
  }
}

TEST_CASE("coded failure rates reproduce the published table") {
  const auto src = VarPsiSource::reference;
  CHECK_LT(std::abs(dfr_bicm(kyber512(), 7, 9, src) - (-623)), 5);
  CHECK_LT(std::abs(dfr_bicm(kyber768(), 7, 9, src) - (-683)), 5);
  CHECK_LT(std::abs(dfr_bicm(kyber1024(), 7, 9, src) - (-791)), 5);
  CHECK_LT(std::abs(dfr_bicm(kyber512(), 7, 8, src) - (-194)), 5);
  CHECK_LT(std::abs(dfr_bicm(kyber768(), 7, 8, src) - (-202)), 5);
  CHECK_LT(std::abs(dfr_bicm(kyber1024(), 7, 8, src) - (-213)), 5);
}

TEST_CASE("tail bound: z = 0 caps at probability one; matches the scalar bound") {
  NoiseModel m = noise_model(kyber768(), VarPsiSource::enumerated);
  CHECK_EQ(tail_bound_log2(16, 0, m), 0.0);

  // l = 1 at the threshold reproduces the per-coefficient tail within a bit
  double sigma = std::sqrt(m.sigma_g2);
  double per_coef = tail_bound_log2(1, 832.0, m);
  double scalar = 1.0 + gaussian_q_log2((832.0 - m.u_half) / sigma);
  CHECK_LT(std::abs(per_coef - scalar), 1.0);
}

TEST_CASE("ciphertext expansion metrics are exact rationals") {
  CHECK_EQ(cer_metrics(kyber512(), "int").cer, Rational{24});
  CHECK_EQ(cer_metrics(kyber768(), "int").cer, Rational{34});
  CHECK_EQ(cer_metrics(kyber1024(), "int").cer, Rational{49});
  CHECK_EQ(cer_metrics(kyber512(), "int").cer_r, Rational{0});

  auto bw = cer_metrics(kyber768(), "bw16");
  CHECK_EQ(bw.cer_r, Rational(1, 5)); // 20%
  CHECK_EQ(bw.n_bits, 320);
  CHECK_EQ(bw.bits_per_block, 20);

  auto le = cer_metrics(kyber768(), "leech");
  CHECK_EQ(le.cer_r, Rational(31, 95)); // 32.6%
  CHECK_EQ(le.n_bits, 380);
  CHECK_EQ(le.bits_per_block, 36);

  CHECK_EQ(cer_metrics(kyber512().with_du_hat(9), "bicm").cer_r, Rational(1, 12));  // 8.33%
  CHECK_EQ(cer_metrics(kyber768().with_du_hat(9), "bicm").cer_r, Rational(3, 34));  // 8.82%
  CHECK_EQ(cer_metrics(kyber1024().with_du_hat(9), "bicm").cer_r, Rational(8, 49)); // 16.33%
  CHECK_EQ(cer_metrics(kyber512().with_du_hat(8), "bicm").cer_r, Rational(1, 6));   // 16.67%
  CHECK_EQ(cer_metrics(kyber768().with_du_hat(8), "bicm").cer_r, Rational(3, 17));  // 17.65%
  CHECK_EQ(cer_metrics(kyber1024().with_du_hat(8), "bicm").cer_r, Rational(12, 49)); // 24.49%

  CHECK_THROWS_AS(cer_metrics(kyber512(), "nope"), std::invalid_argument);
}
