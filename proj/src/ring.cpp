#include "kyberlc/ring.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>
#include <string>

namespace kyberlc {

Seed seed_from_hex(std::string_view hex) {
  if (hex.size() != 64)
    throw std::invalid_argument("seed hex must be 64 characters");
  auto nibble = [](char ch) -> int {
    if (ch >= '0' && ch <= '9') return ch - '0';
    if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
    if (ch >= 'A' && ch <= 'F') return ch - 'A' + 10;
    throw std::invalid_argument("invalid hex digit in seed");
  };
  Seed s{};
  for (int i = 0; i < 32; ++i)
    s[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return s;
}

int compress(int x, int d) {
  if (d < 1 || d > 11)
    throw std::invalid_argument("compress: need 1 <= d <= 11 (2^d < q)");
  if (x < 0 || x >= kQ)
    throw std::invalid_argument("compress: x out of [0, q)");
  auto r = div_round_ties_up(static_cast<std::int64_t>(x) << d, kQ);
  return static_cast<int>(r & ((1 << d) - 1));
}

int decompress(int y, int d) {
  if (d < 1 || d > 11)
    throw std::invalid_argument("decompress: need 1 <= d <= 11");
  if (y < 0 || y >= (1 << d))
    throw std::invalid_argument("decompress: y out of [0, 2^d)");
  // denominator is a power of two, so ties-up rounding is (a + 2^(d-1)) >> d
  return static_cast<int>((static_cast<std::int64_t>(y) * kQ + (1 << (d - 1))) >> d);
}

namespace {

constexpr std::uint32_t rotl(std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); }

void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
  a += b; d ^= a; d = rotl(d, 16);
  c += d; b ^= c; b = rotl(b, 12);
  a += b; d ^= a; d = rotl(d, 8);
  c += d; b ^= c; b = rotl(b, 7);
}

std::uint32_t load_le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

} // namespace

XofStream::XofStream(const Seed& seed, std::uint8_t label, std::uint64_t index) {
  state_[0] = 0x61707865;
  state_[1] = 0x3320646e;
  state_[2] = 0x79622d32;
  state_[3] = 0x6b206574;
  for (int i = 0; i < 8; ++i) state_[4 + i] = load_le32(seed.data() + 4 * i);
  state_[12] = 0; // block counter
  std::uint8_t nonce[12] = {};
  nonce[0] = label;
  for (int i = 0; i < 8; ++i) nonce[1 + i] = static_cast<std::uint8_t>(index >> (8 * i));
  state_[13] = load_le32(nonce);
  state_[14] = load_le32(nonce + 4);
  state_[15] = load_le32(nonce + 8);
}

void XofStream::next_block() {
  std::array<std::uint32_t, 16> x = state_;
  for (int round = 0; round < 10; ++round) {
    quarter_round(x[0], x[4], x[8], x[12]);
    quarter_round(x[1], x[5], x[9], x[13]);
    quarter_round(x[2], x[6], x[10], x[14]);
    quarter_round(x[3], x[7], x[11], x[15]);
    quarter_round(x[0], x[5], x[10], x[15]);
    quarter_round(x[1], x[6], x[11], x[12]);
    quarter_round(x[2], x[7], x[8], x[13]);
    quarter_round(x[3], x[4], x[9], x[14]);
  }
  for (int i = 0; i < 16; ++i) {
    std::uint32_t w = x[i] + state_[i];
    block_[4 * i + 0] = static_cast<std::uint8_t>(w);
    block_[4 * i + 1] = static_cast<std::uint8_t>(w >> 8);
    block_[4 * i + 2] = static_cast<std::uint8_t>(w >> 16);
    block_[4 * i + 3] = static_cast<std::uint8_t>(w >> 24);
  }
  state_[12] += 1;
  pos_ = 0;
}

void XofStream::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == 64) next_block();
    std::size_t take = std::min<std::size_t>(64 - pos_, out.size() - done);
    std::memcpy(out.data() + done, block_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

Seed derive_seed(const Seed& seed, std::uint8_t label, std::uint64_t index) {
  XofStream xs(seed, label, index);
  Seed out;
  xs.fill(out);
  return out;
}

namespace {

// Little-endian bit reader over a byte stream.
class BitReader {
public:
  explicit BitReader(ByteStream& bs) : bs_(bs) {}
  int bit() {
    if (nbits_ == 0) {
      byte_ = bs_.u8();
      nbits_ = 8;
    }
    int b = byte_ & 1;
    byte_ >>= 1;
    --nbits_;
    return b;
  }

private:
  ByteStream& bs_;
  std::uint8_t byte_ = 0;
  int nbits_ = 0;
};

} // namespace

RingElem cbd_sample(int eta, ByteStream& bs) {
  if (eta != 2 && eta != 3)
    throw std::invalid_argument("cbd_sample: eta must be 2 or 3");
  BitReader br(bs);
  RingElem r;
  for (int i = 0; i < kN; ++i) {
    int a = 0, b = 0;
    for (int j = 0; j < eta; ++j) a += br.bit();
    for (int j = 0; j < eta; ++j) b += br.bit();
    int v = a - b;
    r.c[i] = static_cast<std::int16_t>(v < 0 ? v + kQ : v);
  }
  return r;
}

RingElem uniform_sample(ByteStream& bs) {
  RingElem r;
  int got = 0;
  while (got < kN) {
    std::uint8_t buf[3];
    bs.fill(buf);
    int d1 = buf[0] | (buf[1] & 0x0f) << 8;
    int d2 = buf[1] >> 4 | buf[2] << 4;
    if (d1 < kQ && got < kN) r.c[got++] = static_cast<std::int16_t>(d1);
    if (d2 < kQ && got < kN) r.c[got++] = static_cast<std::int16_t>(d2);
  }
  return r;
}

RingElem poly_add(const RingElem& a, const RingElem& b) {
  RingElem r;
  for (int i = 0; i < kN; ++i) {
    int v = a.c[i] + b.c[i];
    r.c[i] = static_cast<std::int16_t>(v >= kQ ? v - kQ : v);
  }
  return r;
}

RingElem poly_sub(const RingElem& a, const RingElem& b) {
  RingElem r;
  for (int i = 0; i < kN; ++i) {
    int v = a.c[i] - b.c[i];
    r.c[i] = static_cast<std::int16_t>(v < 0 ? v + kQ : v);
  }
  return r;
}

RingElem poly_mul(const RingElem& a, const RingElem& b) {
  // Centered operands keep the products small; X^256 = -1 folds the upper
  // half of the convolution back with a sign flip.
  std::array<std::int32_t, kN> ac, bc;
  for (int i = 0; i < kN; ++i) {
    ac[i] = center_mod_q(a.c[i]);
    bc[i] = center_mod_q(b.c[i]);
  }
  std::array<std::int64_t, kN> acc{};
  for (int i = 0; i < kN; ++i) {
    std::int64_t ai = ac[i];
    if (ai == 0) continue;
    int j = 0;
    for (; j < kN - i; ++j) acc[i + j] += ai * bc[j];
    for (; j < kN; ++j) acc[i + j - kN] -= ai * bc[j];
  }
  RingElem r;
  for (int i = 0; i < kN; ++i) {
    int v = static_cast<int>(acc[i] % kQ);
    if (v < 0) v += kQ;
    r.c[i] = static_cast<std::int16_t>(v);
  }
  return r;
}

RingElem inner_product(const RingVec& a, const RingVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner_product: mismatched vector lengths");
  RingElem acc;
  for (std::size_t i = 0; i < a.size(); ++i) acc = poly_add(acc, poly_mul(a[i], b[i]));
  return acc;
}

RingVec vec_add(const RingVec& a, const RingVec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("vec_add: mismatched vector lengths");
  RingVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = poly_add(a[i], b[i]);
  return r;
}

RingElem compress_poly(const RingElem& a, int d) {
  RingElem r;
  for (int i = 0; i < kN; ++i) r.c[i] = static_cast<std::int16_t>(compress(a.c[i], d));
  return r;
}

RingElem decompress_poly(const RingElem& a, int d) {
  RingElem r;
  for (int i = 0; i < kN; ++i) r.c[i] = static_cast<std::int16_t>(decompress(a.c[i], d));
  return r;
}

RingVec compress_vec(const RingVec& a, int d) {
  RingVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = compress_poly(a[i], d);
  return r;
}

RingVec decompress_vec(const RingVec& a, int d) {
  RingVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = decompress_poly(a[i], d);
  return r;
}

} // namespace kyberlc
