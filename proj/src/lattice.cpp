#include "kyberlc/lattice.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace kyberlc {

namespace {

thread_local std::uint64_t g_lattice_ops = 0;

long long checked_mul(long long a, long long b) {
  __int128 p = static_cast<__int128>(a) * b;
  if (p > (__int128)0x7fffffffffffffffLL || p < -(__int128)0x7fffffffffffffffLL)
    throw std::overflow_error("integer matrix arithmetic overflow");
  return static_cast<long long>(p);
}

int dim_checked(const IntMat& m) {
  int n = static_cast<int>(m.size());
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix must be square");
  return n;
}

// round-to-nearest quotient (ties toward zero); keeps remainders half-sized
long long round_div(long long a, long long b) {
  long long q = a / b, r = a % b;
  if (2 * std::abs(r) > std::abs(b)) q += (a < 0) == (b < 0) ? 1 : -1;
  return q;
}

double round_half_down(double x) { return std::ceil(x - 0.5); }

} // namespace

void reset_lattice_op_count() { g_lattice_ops = 0; }
std::uint64_t lattice_op_count() { return g_lattice_ops; }

IntMat mat_identity(int n) {
  IntMat m(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
  int n = static_cast<int>(a.size());
  int k = static_cast<int>(b.size());
  int p = static_cast<int>(b.empty() ? 0 : b[0].size());
  IntMat r(n, IntVec(p, 0));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (int j = 0; j < p; ++j) r[i][j] += checked_mul(a[i][t], b[t][j]);
    }
  return r;
}

IntVec mat_vec(const IntMat& a, const IntVec& x) {
  IntVec r(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) r[i] += checked_mul(a[i][j], x[j]);
  return r;
}

IntVec SnfResult::diagonal() const {
  IntVec out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i][i];
  return out;
}

namespace {

// Elementary transforms keeping B = U * D * V while D is reduced.
struct SnfWork {
  IntMat d, u, u_inv, v, v_inv;
  int n;

  explicit SnfWork(const IntMat& b)
      : d(b), u(mat_identity(dim_checked(b))), u_inv(u), v(u), v_inv(u),
        n(static_cast<int>(b.size())) {}

  void swap_rows(int i, int j) {
    std::swap(d[i], d[j]);
    for (int r = 0; r < n; ++r) std::swap(u[r][i], u[r][j]);
    std::swap(u_inv[i], u_inv[j]);
  }
  void swap_cols(int i, int j) {
    for (int r = 0; r < n; ++r) std::swap(d[r][i], d[r][j]);
    std::swap(v[i], v[j]);
    for (int r = 0; r < n; ++r) std::swap(v_inv[r][i], v_inv[r][j]);
  }
  void negate_row(int i) {
    for (int c = 0; c < n; ++c) d[i][c] = -d[i][c];
    for (int r = 0; r < n; ++r) u[r][i] = -u[r][i];
    for (int c = 0; c < n; ++c) u_inv[i][c] = -u_inv[i][c];
  }
  // row i += c * row j
  void add_row(int i, int j, long long c) {
    for (int t = 0; t < n; ++t) d[i][t] += checked_mul(c, d[j][t]);
    for (int t = 0; t < n; ++t) u[t][j] -= checked_mul(c, u[t][i]);
    for (int t = 0; t < n; ++t) u_inv[i][t] += checked_mul(c, u_inv[j][t]);
  }
  // col i += c * col j
  void add_col(int i, int j, long long c) {
    for (int t = 0; t < n; ++t) d[t][i] += checked_mul(c, d[t][j]);
    for (int t = 0; t < n; ++t) v[j][t] -= checked_mul(c, v[i][t]);
    for (int t = 0; t < n; ++t) v_inv[t][i] += checked_mul(c, v_inv[t][j]);
  }
};

} // namespace

SnfResult snf(const IntMat& b) {
  SnfWork w(b);
  const int n = w.n;

  for (int t = 0; t < n; ++t) {
    for (;;) {
      // smallest nonzero entry in the trailing block becomes the pivot
      int pr = -1, pc = -1;
      for (int i = t; i < n; ++i)
        for (int j = t; j < n; ++j)
          if (w.d[i][j] != 0 &&
              (pr < 0 || std::abs(w.d[i][j]) < std::abs(w.d[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr < 0) throw std::invalid_argument("snf: singular matrix");
      if (pr != t) w.swap_rows(pr, t);
      if (pc != t) w.swap_cols(pc, t);

      bool dirty = false;
      for (int i = t + 1; i < n; ++i)
        if (w.d[i][t] != 0) {
          w.add_row(i, t, -round_div(w.d[i][t], w.d[t][t]));
          dirty |= w.d[i][t] != 0;
        }
      for (int j = t + 1; j < n; ++j)
        if (w.d[t][j] != 0) {
          w.add_col(j, t, -round_div(w.d[t][j], w.d[t][t]));
          dirty |= w.d[t][j] != 0;
        }
      if (dirty) continue;

      // enforce divisibility of the trailing block by the pivot
      int br = -1;
      for (int i = t + 1; i < n && br < 0; ++i)
        for (int j = t + 1; j < n && br < 0; ++j)
          if (w.d[i][j] % w.d[t][t] != 0) br = i;
      if (br < 0) break;
      w.add_row(t, br, 1);
    }
    if (w.d[t][t] < 0) w.negate_row(t);
  }

  return {w.u, w.d, w.v, w.u_inv, w.v_inv};
}

namespace {

// Inverse of a unimodular integer matrix through its SNF (diagonal = I).
IntMat unimodular_inverse(const IntMat& m) {
  SnfResult s = snf(m);
  for (auto d : s.diagonal())
    if (d != 1) throw std::invalid_argument("matrix is not unimodular");
  return mat_mul(s.v_inv, s.u_inv);
}

// ---- Gram-Schmidt, LLL and Schnorr-Euchner enumeration (basis columns) ----

struct Gso {
  int n;
  std::vector<RealVec> cols; // basis columns as doubles
  std::vector<RealVec> mu;   // mu[i][j], j < i
  RealVec bstar2;            // squared GS norms

  void compute(const std::vector<IntVec>& basis_cols) {
    n = static_cast<int>(basis_cols.size());
    cols.assign(n, RealVec(n));
    for (int i = 0; i < n; ++i)
      for (int r = 0; r < n; ++r) cols[i][r] = static_cast<double>(basis_cols[i][r]);
    std::vector<RealVec> star = cols;
    mu.assign(n, RealVec(n, 0.0));
    bstar2.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        double dot = 0;
        for (int r = 0; r < n; ++r) dot += cols[i][r] * star[j][r];
        mu[i][j] = dot / bstar2[j];
        for (int r = 0; r < n; ++r) star[i][r] -= mu[i][j] * star[j][r];
      }
      double nn = 0;
      for (int r = 0; r < n; ++r) nn += star[i][r] * star[i][r];
      bstar2[i] = nn;
    }
  }
};

std::vector<IntVec> to_cols(const IntMat& basis) {
  int n = dim_checked(basis);
  std::vector<IntVec> cols(n, IntVec(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) cols[j][i] = basis[i][j];
  return cols;
}

// Textbook LLL (delta = 0.99) on integer basis columns; double GSO is ample
// for the small well-conditioned bases handled here.
void lll_reduce(std::vector<IntVec>& cols) {
  const double delta = 0.99;
  const int n = static_cast<int>(cols.size());
  Gso g;
  g.compute(cols);
  int k = 1;
  while (k < n) {
    for (int j = k - 1; j >= 0; --j) {
      long long q = std::llround(g.mu[k][j]);
      if (q != 0) {
        for (int r = 0; r < n; ++r) cols[k][r] -= checked_mul(q, cols[j][r]);
        g.compute(cols);
      }
    }
    double lhs = g.bstar2[k];
    double rhs = (delta - g.mu[k][k - 1] * g.mu[k][k - 1]) * g.bstar2[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(cols[k], cols[k - 1]);
      g.compute(cols);
      k = std::max(k - 1, 1);
    }
  }
}

struct EnumState {
  int n = 0;
  const Gso* g = nullptr;
  const std::vector<IntVec>* cols = nullptr;
  RealVec target_gs;      // target in GS coordinates
  const RealVec* target_ambient = nullptr;
  bool integral_target = false;
  IntVec target_int;
  bool skip_zero = false; // SVP mode

  double bound = 0; // squared radius currently admitted
  bool found = false;
  IntVec best_z, best_point;
  long long best_dist2_int = 0;
  double best_dist2 = 0;

  IntVec z;

  void leaf() {
    IntVec point(n, 0);
    for (int i = 0; i < n; ++i) {
      if (z[i] == 0) continue;
      for (int r = 0; r < n; ++r) point[r] += checked_mul(z[i], (*cols)[i][r]);
    }
    if (skip_zero) {
      bool zero = std::all_of(z.begin(), z.end(), [](long long v) { return v == 0; });
      if (zero) return;
    }
    if (integral_target) {
      long long d2 = 0;
      for (int r = 0; r < n; ++r) {
        long long diff = point[r] - target_int[r];
        d2 += checked_mul(diff, diff);
      }
      if (!found || d2 < best_dist2_int ||
          (d2 == best_dist2_int && point < best_point)) {
        found = true;
        best_dist2_int = d2;
        best_dist2 = static_cast<double>(d2);
        best_point = point;
        best_z = z;
        bound = std::min(bound, best_dist2 + 1e-9);
      }
    } else {
      double d2 = 0;
      for (int r = 0; r < n; ++r) {
        double diff = static_cast<double>(point[r]) - (*target_ambient)[r];
        d2 += diff * diff;
      }
      const double tie = 1e-9 * (1.0 + d2);
      if (!found || d2 < best_dist2 - tie ||
          (std::abs(d2 - best_dist2) <= tie && point < best_point)) {
        found = true;
        best_dist2 = d2;
        best_point = point;
        best_z = z;
        bound = std::min(bound, best_dist2 + tie);
      }
    }
  }

  void descend(int level, double partial) {
    if (level < 0) {
      leaf();
      return;
    }
    double c = target_gs[level];
    for (int i = level + 1; i < n; ++i) c -= g->mu[i][level] * z[i];
    const long long z0 = std::llround(c);
    const long long dir = c >= static_cast<double>(z0) ? 1 : -1;
    // zig-zag starting at the rounded center and alternating outward,
    // nearer side first; candidate costs are nondecreasing in this order,
    // so the first candidate over the bound ends the level
    for (int step = 0;; ++step) {
      long long cand = step % 2 == 1 ? z0 + dir * ((step + 1) / 2)
                                     : z0 - dir * (step / 2);
      double diff = c - static_cast<double>(cand);
      double cost = partial + diff * diff * g->bstar2[level];
      if (cost > bound + 1e-12) return;
      z[level] = cand;
      descend(level - 1, cost);
    }
  }
};

} // namespace

namespace {

// cvp_bruteforce is typically called many times against one basis; cache the
// reduced basis and its orthogonalization
const std::pair<std::vector<IntVec>, Gso>& reduced_basis(const IntMat& basis) {
  static thread_local IntMat cached_input;
  static thread_local std::pair<std::vector<IntVec>, Gso> cached;
  if (basis != cached_input) {
    auto cols = to_cols(basis);
    lll_reduce(cols);
    Gso g;
    g.compute(cols);
    cached = {std::move(cols), std::move(g)};
    cached_input = basis;
  }
  return cached;
}

} // namespace

std::optional<IntVec> cvp_bruteforce(const RealVec& y, const IntMat& basis,
                                     double radius) {
  const int n = dim_checked(basis);
  if (n > 24) throw std::invalid_argument("cvp_bruteforce: dimension above 24");
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("cvp_bruteforce: target dimension mismatch");

  const auto& [cols, g] = reduced_basis(basis);

  EnumState st;
  st.n = n;
  st.g = &g;
  st.cols = &cols;
  st.target_ambient = &y;
  st.z.assign(n, 0);

  st.integral_target = true;
  st.target_int.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    double r = std::nearbyint(y[i]);
    if (std::abs(y[i] - r) > 1e-9) {
      st.integral_target = false;
      break;
    }
    st.target_int[i] = static_cast<long long>(r);
  }

  // target in GS coordinates: t_j = <y, b*_j> / |b*_j|^2, via the recurrence
  std::vector<RealVec> star(n, RealVec(n));
  for (int i = 0; i < n; ++i) {
    for (int r = 0; r < n; ++r) star[i][r] = g.cols[i][r];
    for (int j = 0; j < i; ++j)
      for (int r = 0; r < n; ++r) star[i][r] -= g.mu[i][j] * star[j][r];
  }
  st.target_gs.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double dot = 0;
    for (int r = 0; r < n; ++r) dot += y[r] * star[j][r];
    st.target_gs[j] = dot / g.bstar2[j];
  }

  // Babai nearest-plane point seeds the bound
  {
    IntVec zb(n, 0);
    for (int j = n - 1; j >= 0; --j) {
      double c = st.target_gs[j];
      for (int i = j + 1; i < n; ++i) c -= g.mu[i][j] * zb[i];
      zb[j] = std::llround(c);
    }
    double d2 = 0;
    for (int r = 0; r < n; ++r) {
      double v = 0;
      for (int i = 0; i < n; ++i) v += static_cast<double>(cols[i][r]) * zb[i];
      double diff = v - y[r];
      d2 += diff * diff;
    }
    st.bound = std::min(radius * radius * (1 + 1e-12) + 1e-9, d2 + 1e-6);
  }

  st.descend(n - 1, 0.0);
  if (!st.found || st.best_dist2 > radius * radius * (1 + 1e-9) + 1e-9)
    return std::nullopt;
  return st.best_point;
}

ShortestVector shortest_vector(const IntMat& basis) {
  const int n = dim_checked(basis);
  if (n > 24) throw std::invalid_argument("shortest_vector: dimension above 24");
  auto cols = to_cols(basis);
  lll_reduce(cols);
  Gso g;
  g.compute(cols);

  EnumState st;
  st.n = n;
  st.g = &g;
  st.cols = &cols;
  st.skip_zero = true;
  st.integral_target = true;
  st.target_int.assign(n, 0);
  RealVec zero(n, 0.0);
  st.target_ambient = &zero;
  st.target_gs.assign(n, 0.0);
  st.z.assign(n, 0);

  double minb = g.bstar2[0];
  for (int i = 0; i < n; ++i) {
    double c2 = 0;
    for (int r = 0; r < n; ++r)
      c2 += static_cast<double>(cols[i][r]) * cols[i][r];
    minb = std::min(minb, c2);
  }
  st.bound = minb + 1e-6;

  st.descend(n - 1, 0.0);
  return {st.best_dist2_int, st.best_point};
}

// ---- hard-coded code data ------------------------------------------------

namespace {

constexpr int kBw16Basis[16][16] = {
    {1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4},
    {1, 1, 1, 1, 0, 2, 2, 0, 2, 0, 0, 2, 0, 0, 0, 0},
    {1, 1, 1, 0, 1, 2, 0, 2, 0, 2, 0, 0, 2, 0, 0, 0},
    {1, 1, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 1, 0, 1, 1, 0, 2, 2, 0, 0, 2, 0, 0, 2, 0, 0},
    {1, 1, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 1, 0, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 1, 1, 1, 0, 0, 0, 2, 2, 2, 0, 0, 0, 2, 0},
    {1, 0, 1, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 1, 0, 1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0},
    {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 1, 1, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0},
    {1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
};

constexpr int kBw16BHat[16][16] = {
    {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, -1, -1, 0, 0, 0, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, -1, 0, -1, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, -1, -1, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, -1, -1, -1, 0, 2, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {1, -1, 0, 0, -1, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0},
    {1, 0, -1, 0, -1, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0},
    {1, -1, -1, 0, -1, 0, 0, 2, 2, 2, 2, -2, 0, 0, 0, 0},
    {1, 0, 0, -1, -1, 0, 0, 0, 0, 0, 2, -2, 2, 0, 0, 0},
    {1, -1, 0, -1, -1, 2, 0, 0, 0, 2, 2, -2, 0, 2, 0, 0},
    {1, 0, -1, -1, -1, 0, 2, 0, 0, 0, 2, 0, 2, 0, 2, 0},
    {1, -1, -1, -1, -1, 2, 2, 2, 0, 2, 2, -2, 0, 2, 2, 4},
};

// Upper-triangular Leech basis (columns generate; diagonal product 2^36),
// derived once from the Golay-code construction below and pinned here; the
// test suite re-verifies membership, determinant and minimum.
constexpr int kLeechCols[24][24] = {
    {8, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {2, 2, 0, 2, 0, 0, 0, 2, 2, 2, 0, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {2, 2, 2, 0, 2, 0, 0, 0, 2, 2, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {2, 0, 2, 2, 0, 2, 0, 0, 0, 2, 2, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0},
    {2, 2, 0, 2, 2, 0, 2, 0, 0, 0, 2, 2, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0},
    {2, 2, 2, 0, 2, 2, 0, 2, 0, 0, 0, 2, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0},
    {2, 2, 2, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0},
    {2, 0, 2, 2, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0},
    {2, 0, 0, 2, 2, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0},
    {2, 0, 0, 0, 2, 2, 2, 0, 2, 2, 0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0},
    {2, 2, 0, 0, 0, 2, 2, 2, 0, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 2, 0},
    {5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1},
};

IntMat bw16_basis_matrix() {
  IntMat b(16, IntVec(16));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) b[i][j] = kBw16Basis[i][j];
  return b;
}

IntMat bw16_bhat_matrix() {
  IntMat b(16, IntVec(16));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) b[i][j] = kBw16BHat[i][j];
  return b;
}

IntMat leech_basis_matrix() {
  IntMat b(24, IntVec(24));
  for (int j = 0; j < 24; ++j)
    for (int i = 0; i < 24; ++i) b[i][j] = kLeechCols[j][i];
  return b;
}

LatticeCode build_code(IntMat basis, IntMat b_hat, int p, long long lambda2,
                       DecoderKind kind, const IntVec* expected_pi) {
  LatticeCode code;
  code.ell = static_cast<int>(basis.size());
  code.p = p;
  code.basis = std::move(basis);
  code.lambda2 = lambda2;
  code.decoder = kind;

  SnfResult s = snf(code.basis);
  code.pi = s.diagonal();
  if (expected_pi && code.pi != *expected_pi)
    throw std::logic_error("lattice basis SNF does not match pinned diagonal");

  IntMat u;
  if (b_hat.empty()) {
    // rectangular form straight from the factorization: B^ = U diag(pi)
    u = s.u;
    code.b_hat = IntMat(code.ell, IntVec(code.ell, 0));
    for (int i = 0; i < code.ell; ++i)
      for (int j = 0; j < code.ell; ++j)
        code.b_hat[i][j] = checked_mul(s.u[i][j], code.pi[j]);
  } else {
    code.b_hat = std::move(b_hat);
    u = IntMat(code.ell, IntVec(code.ell, 0));
    for (int i = 0; i < code.ell; ++i)
      for (int j = 0; j < code.ell; ++j) {
        if (code.b_hat[i][j] % code.pi[j] != 0)
          throw std::logic_error("B^ is not U diag(pi) for the SNF diagonal");
        u[i][j] = code.b_hat[i][j] / code.pi[j];
      }
  }
  code.u_inv = unimodular_inverse(u);

  code.radix.resize(code.ell);
  code.coord_bits.resize(code.ell);
  code.bits_per_block = 0;
  for (int i = 0; i < code.ell; ++i) {
    if (p % code.pi[i] != 0)
      throw std::logic_error("shaping modulus must be a multiple of every pi_i");
    code.radix[i] = p / code.pi[i];
    if (!std::has_single_bit(static_cast<unsigned long long>(code.radix[i])))
      throw std::logic_error("message radix must be a power of two");
    code.coord_bits[i] = std::countr_zero(static_cast<unsigned long long>(code.radix[i]));
    code.bits_per_block += code.coord_bits[i];
  }
  return code;
}

} // namespace

const LatticeCode& integer_code() {
  static const LatticeCode code =
      build_code(mat_identity(1), {}, 2, 1, DecoderKind::integer, nullptr);
  return code;
}

const LatticeCode& bw16_code() {
  static const LatticeCode code = [] {
    IntVec expected = {1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 4};
    return build_code(bw16_basis_matrix(), bw16_bhat_matrix(), 4, 8,
                      DecoderKind::bw16, &expected);
  }();
  return code;
}

const LatticeCode& leech24_code() {
  static const LatticeCode code = [] {
    IntVec expected = {1, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2,
                       4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4, 8};
    return build_code(leech_basis_matrix(), {}, 8, 32, DecoderKind::leech24,
                      &expected);
  }();
  return code;
}

IntVec hs_encode(const MessageBlock& m, const LatticeCode& code) {
  if (static_cast<int>(m.size()) != code.ell)
    throw std::invalid_argument("hs_encode: message length mismatch");
  for (int i = 0; i < code.ell; ++i)
    if (m[i] < 0 || m[i] >= code.radix[i])
      throw std::invalid_argument("hs_encode: message coordinate out of range");
  IntVec x = mat_vec(code.b_hat, m);
  for (auto& v : x) {
    v %= code.p;
    if (v < 0) v += code.p;
  }
  return x;
}

IntVec cvp_integer(const RealVec& y, double scale) {
  if (scale < 1 || scale != std::floor(scale))
    throw std::invalid_argument("cvp_integer: scale must be a positive integer");
  const long long s = static_cast<long long>(scale);
  IntVec r(y.size());
  for (std::size_t i = 0; i < y.size(); ++i)
    r[i] = checked_mul(static_cast<long long>(round_half_down(y[i] / scale)), s);
  return r;
}

// ---- BW16 decoder ----------------------------------------------------------
//
// L(B) = RM(1,4) + 2 RM(3,4) + 4 Z^16 coordinatewise, so decoding runs in
// three stages: coset-ML over the 32 affine functions (Walsh transform),
// Wagner decoding of the even-weight code, then plain rounding.  Every loop
// below has a fixed trip count.

IntVec cvp_bw16(const RealVec& y) {
  if (y.size() != 16) throw std::invalid_argument("cvp_bw16: need 16 coordinates");

  // squared distance from y_i to b + 2Z
  auto mod2_dist2 = [](double t) {
    double z = round_half_down(t / 2.0);
    double r = t - 2.0 * z;
    return r * r;
  };

  // stage 1: affine coset c1 via Walsh transform of the metric differences
  std::array<double, 16> g{};
  for (int i = 0; i < 16; ++i) {
    g[i] = mod2_dist2(y[i]) - mod2_dist2(y[i] - 1.0);
    g_lattice_ops += 2;
  }
  std::array<double, 16> w = g;
  for (int len = 1; len < 16; len <<= 1)
    for (int i = 0; i < 16; i += len << 1)
      for (int j = i; j < i + len; ++j) {
        double a = w[j], b = w[j + len];
        w[j] = a + b;
        w[j + len] = a - b;
        g_lattice_ops += 2;
      }
  int best_a = 0;
  double best_mag = -1;
  for (int a = 0; a < 16; ++a) {
    double mag = std::abs(w[a]);
    if (mag > best_mag) {
      best_mag = mag;
      best_a = a;
    }
    g_lattice_ops += 1;
  }
  const int sign_bit = w[best_a] > 0 ? 1 : 0;
  std::array<int, 16> c1{};
  for (int i = 0; i < 16; ++i)
    c1[i] = (std::popcount(static_cast<unsigned>(best_a & i)) & 1) ^ sign_bit;

  // stage 2: Wagner decoding of the even-weight (16,15,2) level
  std::array<double, 16> y1{};
  std::array<int, 16> c3{};
  int parity = 0;
  int flip_idx = 0;
  double flip_rel = 0;
  bool first = true;
  for (int i = 0; i < 16; ++i) {
    y1[i] = (y[i] - c1[i]) / 2.0;
    double d0 = mod2_dist2(y1[i]);
    double d1 = mod2_dist2(y1[i] - 1.0);
    c3[i] = d1 < d0 ? 1 : 0;
    parity ^= c3[i];
    double rel = std::abs(d0 - d1);
    if (first || rel < flip_rel) {
      flip_rel = rel;
      flip_idx = i;
      first = false;
    }
    g_lattice_ops += 4;
  }
  c3[flip_idx] ^= parity; // applied unconditionally; a no-op when parity is 0

  // stage 3: free Z^16 level by rounding
  IntVec x(16);
  for (int i = 0; i < 16; ++i) {
    double y2 = (y1[i] - c3[i]) / 2.0;
    long long z = static_cast<long long>(round_half_down(y2));
    x[i] = c1[i] + 2LL * c3[i] + 4LL * z;
    g_lattice_ops += 2;
  }
  return x;
}

// ---- Leech decoder ---------------------------------------------------------
//
// Lattice points split over (m, c) with m the common coordinate parity and
// c a Golay codeword marking the mod-4 pattern; within a class the free part
// is 4 Z^24 restricted to sum(z) = m mod 2.  Exhaustive coset correlation
// with a Wagner parity fix is exact CVP, in a fixed operation schedule.

const std::vector<std::uint32_t>& golay_codewords() {
  static const std::vector<std::uint32_t> words = [] {
    // [I12 | Bg], Bg a bordered circulant of (1 1 0 1 1 1 0 0 0 1 0)
    const int circ[11] = {1, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0};
    std::array<std::uint32_t, 12> gen{};
    gen[0] = 1u;
    for (int j = 0; j < 11; ++j) gen[0] |= 1u << (13 + j);
    for (int r = 0; r < 11; ++r) {
      std::uint32_t m = 1u << (r + 1) | 1u << 12;
      for (int c = 0; c < 11; ++c)
        if (circ[((c - r) % 11 + 11) % 11]) m |= 1u << (13 + c);
      gen[r + 1] = m;
    }
    std::vector<std::uint32_t> words(4096, 0);
    for (int m = 1; m < 4096; ++m)
      words[m] = words[m & (m - 1)] ^ gen[std::countr_zero(static_cast<unsigned>(m))];
    return words;
  }();
  return words;
}

bool leech_member(const IntVec& x) {
  if (x.size() != 24) return false;
  long long m = ((x[0] % 2) + 2) % 2;
  std::uint32_t patt = 0;
  long long sum = 0;
  for (int i = 0; i < 24; ++i) {
    if (((x[i] % 2) + 2) % 2 != m) return false;
    if (((x[i] - m - 2) % 4 + 4) % 4 == 0) patt |= 1u << i;
    sum += x[i];
  }
  const auto& words = golay_codewords();
  if (std::find(words.begin(), words.end(), patt) == words.end()) return false;
  return ((sum - 4 * m) % 8 + 8) % 8 == 0;
}

IntVec cvp_leech(const RealVec& y) {
  if (y.size() != 24) throw std::invalid_argument("cvp_leech: need 24 coordinates");
  const auto& words = golay_codewords();

  double best_metric = 0;
  int best_m = -1;
  std::uint32_t best_c = 0;

  for (int m = 0; m < 2; ++m) {
    // per coordinate and bit value: squared distance to the nearest admitted
    // residue, its z-parity, and the penalty for moving to the second-nearest
    double d2[24][2], pen[24][2];
    int par[24][2];
    for (int i = 0; i < 24; ++i) {
      for (int b = 0; b < 2; ++b) {
        double t = (y[i] - m - 2 * b) / 4.0;
        double z = round_half_down(t);
        double r = t - z;
        d2[i][b] = 16.0 * r * r;
        pen[i][b] = 16.0 * (1.0 - 2.0 * std::abs(r));
        par[i][b] = static_cast<int>(std::llabs(static_cast<long long>(z))) & 1;
        g_lattice_ops += 4;
      }
    }

    // half-mask tables over the low/high 12 coordinates
    static thread_local std::vector<double> mlo(4096), mhi(4096), plo(4096), phi(4096);
    static thread_local std::vector<int> qlo(4096), qhi(4096);
    double base_lo = 0, base_hi = 0;
    int par_lo0 = 0, par_hi0 = 0;
    for (int i = 0; i < 12; ++i) {
      base_lo += d2[i][0];
      par_lo0 ^= par[i][0];
      base_hi += d2[12 + i][0];
      par_hi0 ^= par[12 + i][0];
      g_lattice_ops += 2;
    }
    mlo[0] = base_lo;
    mhi[0] = base_hi;
    qlo[0] = par_lo0;
    qhi[0] = par_hi0;
    for (int msk = 1; msk < 4096; ++msk) {
      int lb = std::countr_zero(static_cast<unsigned>(msk));
      int prev = msk & (msk - 1);
      mlo[msk] = mlo[prev] + d2[lb][1] - d2[lb][0];
      qlo[msk] = qlo[prev] ^ par[lb][1] ^ par[lb][0];
      mhi[msk] = mhi[prev] + d2[12 + lb][1] - d2[12 + lb][0];
      qhi[msk] = qhi[prev] ^ par[12 + lb][1] ^ par[12 + lb][0];
      g_lattice_ops += 4;
    }
    for (int msk = 0; msk < 4096; ++msk) {
      double lo = pen[0][msk & 1], hi = pen[12][msk & 1];
      for (int i = 1; i < 12; ++i) {
        lo = std::min(lo, pen[i][(msk >> i) & 1]);
        hi = std::min(hi, pen[12 + i][(msk >> i) & 1]);
      }
      plo[msk] = lo;
      phi[msk] = hi;
      g_lattice_ops += 22;
    }

    for (std::uint32_t c : words) {
      std::uint32_t lo = c & 0xfff, hi = c >> 12;
      double metric = mlo[lo] + mhi[hi];
      int parz = qlo[lo] ^ qhi[hi];
      // parity repair cost applies only when sum(z) has the wrong parity
      double repair = (parz != m) ? std::min(plo[lo], phi[hi]) : 0.0;
      metric += repair;
      if (best_m < 0 || metric < best_metric) {
        best_metric = metric;
        best_m = m;
        best_c = c;
      }
      g_lattice_ops += 5;
    }
  }

  // reconstruct the winning class point
  IntVec x(24);
  long long zsum = 0;
  double flip_pen = 0;
  int flip_idx = 0;
  bool first = true;
  std::array<long long, 24> zval{};
  std::array<double, 24> resid{};
  for (int i = 0; i < 24; ++i) {
    int b = (best_c >> i) & 1;
    double t = (y[i] - best_m - 2 * b) / 4.0;
    long long z = static_cast<long long>(round_half_down(t));
    double r = t - z;
    zval[i] = z;
    resid[i] = r;
    zsum += z;
    double p = 16.0 * (1.0 - 2.0 * std::abs(r));
    if (first || p < flip_pen) {
      flip_pen = p;
      flip_idx = i;
      first = false;
    }
  }
  if ((((zsum % 2) + 2) % 2) != best_m)
    zval[flip_idx] += resid[flip_idx] >= 0 ? 1 : -1;
  for (int i = 0; i < 24; ++i)
    x[i] = best_m + 2LL * ((best_c >> i) & 1) + 4LL * zval[i];
  return x;
}

IntVec cvp(const LatticeCode& code, const RealVec& y) {
  switch (code.decoder) {
    case DecoderKind::integer: return cvp_integer(y, 1.0);
    case DecoderKind::bw16: return cvp_bw16(y);
    case DecoderKind::leech24: return cvp_leech(y);
  }
  throw std::logic_error("unknown decoder kind");
}

MessageBlock hs_cvp_decode(const RealVec& y, const LatticeCode& code) {
  if (static_cast<int>(y.size()) != code.ell)
    throw std::invalid_argument("hs_cvp_decode: dimension mismatch");
  IntVec point = cvp(code, y);
  IntVec w = mat_vec(code.u_inv, point);
  MessageBlock m(code.ell);
  for (int i = 0; i < code.ell; ++i) {
    if (w[i] % code.pi[i] != 0)
      throw std::logic_error("decoded point is not on the lattice");
    long long z = w[i] / code.pi[i];
    m[i] = ((z % code.radix[i]) + code.radix[i]) % code.radix[i];
  }
  return m;
}

int BlockSchedule::coords() const {
  int n = 0;
  for (const auto& p : parts) n += p.code->ell * p.count;
  return n;
}

int BlockSchedule::blocks() const {
  int n = 0;
  for (const auto& p : parts) n += p.count;
  return n;
}

int BlockSchedule::bits() const {
  int n = 0;
  for (const auto& p : parts) n += p.code->bits_per_block * p.count;
  return n;
}

namespace {

BlockSchedule checked_schedule(BlockSchedule s) {
  if (s.coords() != 256)
    throw std::logic_error("block schedule must cover 256 coordinates");
  return s;
}

} // namespace

BlockSchedule integer_schedule() {
  return checked_schedule({{{&integer_code(), 256}}});
}

BlockSchedule bw16_schedule() {
  return checked_schedule({{{&bw16_code(), 16}}});
}

BlockSchedule leech_schedule() {
  return checked_schedule({{{&leech24_code(), 10}, {&bw16_code(), 1}}});
}

} // namespace kyberlc
