#include "kyberlc/bch.hpp"

#include <array>
#include <stdexcept>

namespace kyberlc {

namespace {

thread_local std::uint64_t g_bch_ops = 0;

constexpr std::uint32_t kPrimPoly = 0x211; // x^9 + x^4 + 1
constexpr int kOrder = 511;

// Branch-free carryless multiply in GF(2^9): nine shift-and-adds followed by
// a fixed reduction, so the work done never depends on the operands.
std::uint32_t gf_mul(std::uint32_t a, std::uint32_t b) {
  ++g_bch_ops;
  std::uint32_t r = 0;
  for (int i = 0; i < 9; ++i)
    r ^= (a << i) & static_cast<std::uint32_t>(-static_cast<std::int32_t>(b >> i & 1));
  for (int i = 16; i >= 9; --i)
    r ^= (kPrimPoly << (i - 9)) &
         static_cast<std::uint32_t>(-static_cast<std::int32_t>(r >> i & 1));
  return r;
}

std::uint32_t gf_pow(std::uint32_t a, int e) {
  std::uint32_t r = 1;
  for (int i = 0; i < e; ++i) r = gf_mul(r, a);
  return r;
}

} // namespace

void reset_bch_op_count() { g_bch_ops = 0; }
std::uint64_t bch_op_count() { return g_bch_ops; }

BchCode::BchCode() {
  // generator = lcm of the minimal polynomials of alpha^1 .. alpha^2t
  std::array<bool, kOrder> covered{};
  std::vector<std::uint32_t> g = {1}; // polynomial over the field, ascending

  for (int r = 1; r <= 2 * kT; ++r) {
    if (covered[r]) continue;
    // cyclotomic coset of r under doubling mod 511
    std::vector<int> coset;
    int e = r;
    do {
      coset.push_back(e);
      covered[e] = true;
      e = 2 * e % kOrder;
    } while (e != r);

    std::vector<std::uint32_t> minpoly = {1};
    for (int exp : coset) {
      std::uint32_t root = gf_pow(2, exp); // alpha = x
      std::vector<std::uint32_t> next(minpoly.size() + 1, 0);
      for (std::size_t i = 0; i < minpoly.size(); ++i) {
        next[i + 1] ^= minpoly[i];
        next[i] ^= gf_mul(minpoly[i], root);
      }
      minpoly = std::move(next);
    }
    for (auto c : minpoly)
      if (c > 1) throw std::logic_error("minimal polynomial is not binary");

    std::vector<std::uint32_t> prod(g.size() + minpoly.size() - 1, 0);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < minpoly.size(); ++j)
        prod[i + j] ^= g[i] & minpoly[j];
    g = std::move(prod);
  }

  if (g.size() != kNFull - kKFull + 1)
    throw std::logic_error("BCH generator degree is not 63");
  gen_.assign(g.begin(), g.end());
  for (int i = 0; i < 63; ++i) gen_low_ |= static_cast<std::uint64_t>(g[i]) << i;
}

const BchCode& BchCode::instance() {
  static const BchCode code;
  return code;
}

BitVec BchCode::encode(const BitVec& msg) const {
  if (static_cast<int>(msg.size()) != kK)
    throw std::invalid_argument("bch_encode: message must be 257 bits");
  if (msg[kK - 1] != 0)
    throw std::invalid_argument("bch_encode: pad bit 256 must be 0");

  // parity = x^63 m(x) mod g(x); the 191 virtual zeros at the top of the
  // message register contribute nothing and are skipped
  std::uint64_t reg = 0;
  for (int i = kK - 1; i >= 0; --i) {
    std::uint64_t fb = (reg >> 62 & 1) ^ (msg[i] & 1);
    reg = (reg << 1) & ((1ULL << 63) - 1);
    reg ^= gen_low_ & (~fb + 1);
  }

  BitVec cw(kN, 0);
  for (int i = 0; i < 63; ++i) cw[i] = static_cast<std::uint8_t>(reg >> i & 1);
  for (int i = 0; i < kK; ++i) cw[63 + i] = msg[i];
  return cw;
}

BchDecodeResult BchCode::decode(const BitVec& word) const {
  if (static_cast<int>(word.size()) != kN)
    throw std::invalid_argument("bch_decode: word must be 320 bits");

  constexpr int kSynCount = 2 * kT;         // 14
  constexpr int kLocLen = kT + 2;           // locator register length

  // syndromes S_j = r(alpha^j), Horner over all 320 positions
  std::array<std::uint32_t, kSynCount + 1> syn{};
  for (int j = 1; j <= kSynCount; ++j) {
    const std::uint32_t aj = gf_pow(2, j);
    std::uint32_t acc = 0;
    for (int i = kN - 1; i >= 0; --i) acc = gf_mul(acc, aj) ^ word[i];
    syn[j] = acc;
  }

  // inversion-free Berlekamp-Massey, fixed 2t iterations, masked updates
  std::array<std::uint32_t, kLocLen> sigma{}, prev{};
  sigma[0] = 1;
  prev[0] = 1;
  std::uint32_t b = 1;
  int big_l = 0;
  for (int n = 0; n < kSynCount; ++n) {
    std::uint32_t d = 0;
    for (int i = 0; i < kLocLen; ++i) {
      int si = n + 1 - i;
      std::uint32_t s = (si >= 1 && si <= kSynCount) ? syn[si] : 0;
      d ^= gf_mul(sigma[i], s);
    }

    const bool swap = d != 0 && 2 * big_l <= n;
    std::array<std::uint32_t, kLocLen> shifted{};
    for (int i = kLocLen - 1; i >= 1; --i) shifted[i] = prev[i - 1];

    std::array<std::uint32_t, kLocLen> next{};
    for (int i = 0; i < kLocLen; ++i)
      next[i] = gf_mul(b, sigma[i]) ^ gf_mul(d, shifted[i]);

    const std::uint32_t keep = swap ? 0xffffffffu : 0;
    for (int i = 0; i < kLocLen; ++i)
      prev[i] = (sigma[i] & keep) | (shifted[i] & ~keep);
    b = (d & keep) | (b & ~keep);
    big_l = swap ? n + 1 - big_l : big_l;
    sigma = next;
  }

  int deg = 0;
  for (int i = 0; i < kLocLen; ++i) deg = sigma[i] != 0 ? i : deg;

  // full Chien sweep: sigma(alpha^k) for every k; root at alpha^k marks an
  // error at position (511 - k) mod 511
  std::array<std::uint32_t, kLocLen> reg{};
  std::array<std::uint32_t, kLocLen> step{};
  for (int i = 0; i < kLocLen; ++i) {
    reg[i] = sigma[i];
    step[i] = gf_pow(2, i);
  }
  std::array<int, kT + 1> roots{};
  int nroots = 0;
  bool out_of_range = false;
  for (int k = 0; k < kNFull; ++k) {
    std::uint32_t val = 0;
    for (int i = 0; i < kLocLen; ++i) val ^= reg[i];
    if (val == 0) {
      const int pos = (kNFull - k) % kNFull;
      out_of_range |= pos >= kN;
      if (nroots <= kT) roots[nroots] = pos;
      ++nroots;
    }
    for (int i = 0; i < kLocLen; ++i) reg[i] = gf_mul(reg[i], step[i]);
  }

  BchDecodeResult res;
  res.failed = big_l > kT || deg != big_l || nroots != big_l || out_of_range;

  BitVec corrected = word;
  if (!res.failed)
    for (int i = 0; i < nroots; ++i) corrected[roots[i]] ^= 1;

  // consistency: a successful correction must leave zero syndromes
  std::uint32_t resid = 0;
  for (int j = 1; j <= kSynCount; ++j) {
    const std::uint32_t aj = gf_pow(2, j);
    std::uint32_t acc = 0;
    for (int i = kN - 1; i >= 0; --i) acc = gf_mul(acc, aj) ^ corrected[i];
    resid |= acc;
  }
  res.failed = res.failed || resid != 0;

  res.msg.assign(corrected.begin() + 63, corrected.end());
  res.corrected = res.failed ? 0 : nroots;
  res.failed = res.failed || res.msg[kK - 1] != 0; // pad bit must survive
  return res;
}

} // namespace kyberlc
