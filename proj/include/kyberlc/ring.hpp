#pragma once

// Arithmetic in R_q = Z_q[X]/(X^n + 1) with n = 256, q = 3329, the lossy
// Compress/Decompress rounding maps, and deterministic sampling from a
// seeded extendable byte stream.

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace kyberlc {

inline constexpr int kN = 256;  // ring degree
inline constexpr int kQ = 3329; // coefficient modulus

using Seed = std::array<std::uint8_t, 32>;

Seed seed_from_hex(std::string_view hex);

// Rounding to the nearest integer with ties up, as a/b for a >= 0, b > 0.
constexpr std::int64_t div_round_ties_up(std::int64_t a, std::int64_t b) {
  return (2 * a + b) / (2 * b);
}

// round((q/p)) for the payload scaling step; p = 2 gives 1665.
constexpr int payload_scale(int p) {
  return static_cast<int>(div_round_ties_up(kQ, p));
}

// Centered representative of x mod q, in [-(q-1)/2, (q-1)/2].
constexpr int center_mod_q(int x) {
  int r = x % kQ;
  if (r < 0) r += kQ;
  return r > (kQ - 1) / 2 ? r - kQ : r;
}

// Compress_q(x, d) = round((2^d/q) x) mod 2^d, ties up.  Requires 2^d < q.
int compress(int x, int d);

// Decompress_q(y, d) = round((q/2^d) y), ties up.  Requires 0 <= y < 2^d.
int decompress(int y, int d);

struct RingElem {
  std::array<std::int16_t, kN> c{}; // coefficients, canonical in [0, q)

  bool operator==(const RingElem&) const = default;
};

struct RingVec {
  std::vector<RingElem> elems;

  explicit RingVec(std::size_t k = 0) : elems(k) {}
  std::size_t size() const { return elems.size(); }
  RingElem& operator[](std::size_t i) { return elems[i]; }
  const RingElem& operator[](std::size_t i) const { return elems[i]; }
  bool operator==(const RingVec&) const = default;
};

// An unbounded deterministic byte source.  Identical seeds yield identical
// streams; instances are single-consumer.
class ByteStream {
public:
  virtual ~ByteStream() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint8_t u8() {
    std::uint8_t b;
    fill({&b, 1});
    return b;
  }
};

// Seeded extendable stream (ChaCha20 keystream).  The label byte and stream
// index select independent streams per call site under one seed.
class XofStream final : public ByteStream {
public:
  XofStream(const Seed& seed, std::uint8_t label, std::uint64_t index = 0);
  void fill(std::span<std::uint8_t> out) override;

private:
  void next_block();

  std::array<std::uint32_t, 16> state_;
  std::array<std::uint8_t, 64> block_;
  std::size_t pos_ = 64;
};

// Derives a fresh 32-byte seed from (seed, label, index).
Seed derive_seed(const Seed& seed, std::uint8_t label, std::uint64_t index = 0);

// Centered binomial sampler beta_eta: each coefficient is the difference of
// two eta-bit popcounts, in [-eta, eta], stored canonically mod q.
RingElem cbd_sample(int eta, ByteStream& bs);

// Rejection sampler for coefficients uniform on [0, q), consuming 12-bit
// candidates (two per three stream bytes).
RingElem uniform_sample(ByteStream& bs);

RingElem poly_add(const RingElem& a, const RingElem& b);
RingElem poly_sub(const RingElem& a, const RingElem& b);

// Negacyclic product in Z_q[X]/(X^256 + 1): schoolbook with sign folding.
RingElem poly_mul(const RingElem& a, const RingElem& b);

// Sum of k componentwise products; mismatched lengths are rejected.
RingElem inner_product(const RingVec& a, const RingVec& b);

RingVec vec_add(const RingVec& a, const RingVec& b);

RingElem compress_poly(const RingElem& a, int d);
RingElem decompress_poly(const RingElem& a, int d);
RingVec compress_vec(const RingVec& a, int d);
RingVec decompress_vec(const RingVec& a, int d);

} // namespace kyberlc
