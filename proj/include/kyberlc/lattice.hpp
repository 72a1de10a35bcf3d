#pragma once

// Lattice codes with hypercube shaping: integer bases and their Smith
// Normal Form, the rectangular-form encoder x = B^ m mod p, CVP decoders
// for Z^l, BW16 and Leech24, an exact enumeration oracle, and exact
// shortest-vector search.

#include <cstdint>
#include <optional>
#include <vector>

namespace kyberlc {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;
using RealVec = std::vector<double>;

IntMat mat_identity(int n);
IntMat mat_mul(const IntMat& a, const IntMat& b);
IntVec mat_vec(const IntMat& a, const IntVec& x);

// B = U * D * V with U, V unimodular and D diagonal, d_i | d_{i+1}.
// Inverses of the unimodular factors come out of the same reduction.
struct SnfResult {
  IntMat u, d, v;
  IntMat u_inv, v_inv;
  IntVec diagonal() const;
};
SnfResult snf(const IntMat& b);

enum class DecoderKind { integer, bw16, leech24 };

// An l-dimensional lattice code shaped into the hypercube Z_p^l.
struct LatticeCode {
  int ell = 0;
  int p = 0;               // shaping modulus, a common multiple of all pi_i
  IntMat basis;            // B; columns generate the lattice
  IntMat b_hat;            // rectangular form U * diag(pi)
  IntMat u_inv;            // exact inverse of the unimodular U
  IntVec pi;               // SNF diagonal
  IntVec radix;            // message radix p / pi_i per coordinate
  std::vector<int> coord_bits; // log2(radix_i)
  int bits_per_block = 0;  // b(l, p) = sum of coord_bits
  long long lambda2 = 0;   // squared minimum distance of L(B)
  DecoderKind decoder = DecoderKind::integer;
};

// Z^1 with p = 2: the original bit-per-coefficient encoder.
const LatticeCode& integer_code();
// Barnes-Wall dimension 16, p = 4, lambda^2 = 8.
const LatticeCode& bw16_code();
// Leech dimension 24 (integer scaling, det 2^36), p = 8, lambda^2 = 32.
const LatticeCode& leech24_code();

using MessageBlock = IntVec; // m_i in [0, p/pi_i)

// x = B^ m mod p.  Rejects out-of-range messages.
IntVec hs_encode(const MessageBlock& m, const LatticeCode& code);

// m^ = B^{-1} CVP(y, L(B)) mod (p/pi_1, ..., p/pi_l).
MessageBlock hs_cvp_decode(const RealVec& y, const LatticeCode& code);

// Componentwise rounding: exact CVP for scale * Z^l.
IntVec cvp_integer(const RealVec& y, double scale);

// Bounded-distance decoders: whenever dist(y, L) < lambda/2 they return the
// unique closest point, and otherwise some lattice point.  Both run a fixed
// operation schedule independent of the input.
IntVec cvp_bw16(const RealVec& y);
IntVec cvp_leech(const RealVec& y);

// Decoder dispatch for a code's lattice.
IntVec cvp(const LatticeCode& code, const RealVec& y);

// Exact CVP by depth-first sphere enumeration (Fincke-Pohst with
// Schnorr-Euchner ordering); ties broken by lexicographically smallest
// coordinate vector.  Empty when no lattice point lies within radius.
std::optional<IntVec> cvp_bruteforce(const RealVec& y, const IntMat& basis,
                                     double radius);

struct ShortestVector {
  long long norm2;
  IntVec v;
};
// Exact minimum of L(B) by sphere enumeration, l <= 24.
ShortestVector shortest_vector(const IntMat& basis);

// Instrumented operation counts for the constant-time contract; cvp_bw16 and
// cvp_leech add to this counter.
void reset_lattice_op_count();
std::uint64_t lattice_op_count();

// An ordered block layout covering the 256 ring coefficients.
struct BlockSchedule {
  struct Part {
    const LatticeCode* code;
    int count;
  };
  std::vector<Part> parts;

  int coords() const;
  int blocks() const;
  int bits() const; // N = sum count * b(l, p)
};

BlockSchedule integer_schedule(); // 256 x Z^1
BlockSchedule bw16_schedule();    // 16 x BW16
BlockSchedule leech_schedule();   // 10 x Leech24 + 1 x BW16

// The binary Golay codewords as 24-bit masks, in generator-span order;
// also the membership view used to validate the Leech basis.
const std::vector<std::uint32_t>& golay_codewords();
bool leech_member(const IntVec& x);

} // namespace kyberlc
