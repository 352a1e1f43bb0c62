#include "mcg/ramified.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mcg {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

// ---------------------------------------------------------------------------
// Counting.

i64 omega_bar_count(int v, int r, i64 p) {
  if (v < 1 || r < 0) throw std::invalid_argument("omega_bar_count: bad arguments");
  __int128 pv = 1;
  for (int i = 0; i < v; ++i) pv *= p;
  __int128 t = 1;
  for (int i = 0; i < r; ++i) t *= (pv - 1);
  const i64 sign = (r % 2 == 0) ? 1 : -1;
  __int128 res = (t - sign) / pv + sign;
  return static_cast<i64>(res);
}

i64 omega_count(int v, int r, i64 p) {
  if (v < 1) throw std::invalid_argument("omega_count: v must be >= 1");
  std::vector<i64> w(static_cast<size_t>(v) + 1, 0);
  for (int l = 1; l <= v; ++l) {
    i64 acc = omega_bar_count(l, r, p);
    for (int m = 1; m < l; ++m) acc -= subspace_count(l, m, p) * w[m];
    w[l] = acc;
  }
  return w[v];
}

i64 scaled_sum_count(const std::vector<i64>& coeffs, int v, i64 p) {
  for (i64 a : coeffs)
    if (a % p == 0) throw std::invalid_argument("scaled_sum_count: coefficients must be nonzero mod p");
  // (X_1..X_s) <-> (a_1 X_1 .. a_s X_s) is a bijection onto Omega(v, s).
  return omega_count(v, static_cast<int>(coeffs.size()), p);
}

i64 beta_n(i64 n, i64 p) {
  if (n < 1 || !is_prime(p)) throw std::invalid_argument("beta_n: bad arguments");
  i64 count = 0;
  for (i64 x = 1; x < p; ++x) {
    i64 acc = x % p, ord = 1;
    while (acc != 1) {
      acc = acc * x % p;
      ++ord;
    }
    if (ord == n) ++count;
  }
  if (n == 1 && p >= 2) count = 1;  // x = 1
  return count;
}

i64 table51(int r, int v, i64 p) {
  if (!is_prime(p)) throw std::invalid_argument("table51: p must be prime");
  const i64 b3 = beta_n(3, p), b4 = beta_n(4, p);
  if (r == 3 && v == 1) {
    if (p == 2) return 0;
    if (p == 3) return 1;
    return b3 == 2 ? (p + 5) / 6 : (p + 1) / 6;
  }
  if (r == 3 && v == 2) return 1;
  if (r == 4 && v == 1) {
    if (p == 2 || p == 3) return 1;
    return b4 == 2 ? (p * p + 6 * p + 17) / 24 : (p * p + 6 * p + 5) / 24;
  }
  if (r == 4 && v == 2) {
    if (p == 2) throw OutOfScope("table51: no published value for r=4, v=2, p=2");
    if (p == 3) return 2;
    if (b3 == 2 && b4 == 2) return (p * p + 10 * p + 37) / 24;
    if (b3 == 2 && b4 == 0) return (p * p + 10 * p + 25) / 24;
    if (b3 == 0 && b4 == 2) return (p * p + 10 * p + 21) / 24;
    return (p * p + 10 * p + 9) / 24;
  }
  if (r == 4 && v == 3) return 1;
  throw OutOfScope("table51: unsupported (r, v) pair");
}

// ---------------------------------------------------------------------------
// Omega membership, action, enumeration.

bool is_omega(const FpMatrix& x) {
  const int v = x.rows(), r = x.cols();
  if (v < 1 || r < 1) return false;
  for (int j = 0; j < r; ++j) {
    bool nonzero = false;
    i64 sum = 0;
    for (int i = 0; i < v; ++i)
      if (x.at(i, j) != 0) nonzero = true;
    (void)sum;
    if (!nonzero) return false;
  }
  for (int i = 0; i < v; ++i) {
    i64 sum = 0;
    for (int j = 0; j < r; ++j) sum += x.at(i, j);
    if (sum % x.modulus() != 0) return false;
  }
  return x.rank() == v;
}

OmegaMatrix make_omega(FpMatrix x) {
  if (!is_omega(x)) throw std::invalid_argument("make_omega: matrix is not in Omega");
  return OmegaMatrix{std::move(x)};
}

OmegaMatrix act(const ActionElement& a, const OmegaMatrix& x) {
  const int v = x.x.rows(), r = x.x.cols();
  if (a.g.rows() != v || a.g.cols() != v || a.alpha.degree() != r ||
      a.g.modulus() != x.x.modulus())
    throw std::invalid_argument("act: shape or modulus mismatch");
  // column i of the result is g * X_{alpha(i)}
  FpMatrix permuted(v, r, x.x.modulus());
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < v; ++i) permuted.set(i, j, x.x.at(i, a.alpha(j)));
  return OmegaMatrix{a.g * permuted};
}

namespace {

void check_omega_enumerable(int v, int r, i64 p, i64 ceiling) {
  if (v < 1 || r < 1) throw std::invalid_argument("omega enumeration: bad shape");
  __int128 n = 1;
  for (int i = 0; i < v * (r - 1); ++i) {
    n *= p;
    if (n > ceiling) throw CeilingExceeded("omega enumeration: p^(v(r-1)) exceeds ceiling");
  }
}

// Builds the matrix for the current digit assignment of the free columns
// and completes the last column; returns true when the result is in Omega.
bool materialize_omega(const std::vector<i64>& digits, int v, int r, i64 p, FpMatrix& out) {
  for (int j = 0; j + 1 < r; ++j)
    for (int i = 0; i < v; ++i) out.set(i, j, digits[static_cast<size_t>(j) * v + i]);
  for (int i = 0; i < v; ++i) {
    i64 sum = 0;
    for (int j = 0; j + 1 < r; ++j) sum += out.at(i, j);
    out.set(i, r - 1, -sum);
  }
  for (int j = 0; j < r; ++j) {
    bool nonzero = false;
    for (int i = 0; i < v; ++i)
      if (out.at(i, j) != 0) nonzero = true;
    if (!nonzero) return false;
  }
  return out.rank() == v;
}

}  // namespace

void for_each_omega(int v, int r, i64 p, const std::function<void(const FpMatrix&)>& fn,
                    i64 ceiling) {
  check_omega_enumerable(v, r, p, ceiling);
  const int nd = v * (r - 1);
  std::vector<i64> digits(nd, 0);
  FpMatrix m(v, r, p);
  while (true) {
    if (materialize_omega(digits, v, r, p, m)) fn(m);
    int pos = nd - 1;
    while (pos >= 0 && digits[pos] == p - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
  }
}

OmegaRange::OmegaRange(int v, int r, i64 p, i64 ceiling) : v_(v), r_(r), p_(p) {
  check_omega_enumerable(v, r, p, ceiling);
}

OmegaRange::iterator::iterator(int v, int r, i64 p, bool end)
    : v_(v), r_(r), p_(p), digits_(static_cast<size_t>(v) * (r - 1), 0), cur_(v, r, p), done_(end) {
  if (!end) {
    fresh_ = true;
    advance();
  }
}

void OmegaRange::iterator::advance() {
  const int nd = v_ * (r_ - 1);
  while (true) {
    if (!fresh_) {
      int pos = nd - 1;
      while (pos >= 0 && digits_[pos] == p_ - 1) digits_[pos--] = 0;
      if (pos < 0) {
        done_ = true;
        return;
      }
      ++digits_[pos];
    }
    fresh_ = false;
    if (materialize_omega(digits_, v_, r_, p_, cur_)) return;
  }
}

OmegaRange::iterator& OmegaRange::iterator::operator++() {
  advance();
  return *this;
}

OmegaMatrix unique_when_r_is_v_plus_1(int v, i64 p) {
  FpMatrix m(v, v + 1, p);
  for (int i = 0; i < v; ++i) {
    m.set(i, i, 1);
    m.set(i, v, -1);
  }
  return make_omega(std::move(m));
}

// ---------------------------------------------------------------------------
// Intertwiner linear algebra.

namespace {

std::vector<Perm> minimal_generators(const PermSubgroup& h) {
  std::vector<Perm> gens;
  PermSubgroup cur = closure(h.degree, {});
  for (const auto& e : h.elements) {
    if (cur.contains(e)) continue;
    gens.push_back(e);
    cur = closure(h.degree, gens);
    if (cur.order() == h.order()) break;
  }
  return gens;
}

int element_index(const PermSubgroup& h, const Perm& e) {
  auto it = std::lower_bound(h.elements.begin(), h.elements.end(), e);
  if (it == h.elements.end() || !(*it == e))
    throw std::logic_error("element not in subgroup table");
  return static_cast<int>(it - h.elements.begin());
}

Perm conj_elem(const Perm& e, const Perm& alpha) {
  // alpha^{-1} e alpha in left-to-right products.
  return alpha.inverse().then(e).then(alpha);
}

// Kernel of { Q_k X = X P_k } (+ optionally zero column sums) for unknown
// v x cols matrices X, flattened row-major.
std::vector<std::vector<i64>> intertwiner_kernel(
    int v, int cols, i64 p, const std::vector<std::pair<FpMatrix, FpMatrix>>& eqs,
    bool column_sums_zero) {
  const int unknowns = v * cols;
  int rows = static_cast<int>(eqs.size()) * unknowns + (column_sums_zero ? v : 0);
  FpMatrix sys(rows, unknowns, p);
  int row = 0;
  for (const auto& [q, perm] : eqs) {
    for (int i = 0; i < v; ++i)
      for (int j = 0; j < cols; ++j) {
        for (int a = 0; a < v; ++a)
          for (int b = 0; b < cols; ++b) {
            i64 coeff = 0;
            if (b == j) coeff += q.at(i, a);
            if (a == i) coeff -= perm.at(b, j);
            if (coeff != 0) sys.set(row, a * cols + b, sys.at(row, a * cols + b) + coeff);
          }
        ++row;
      }
  }
  if (column_sums_zero)
    for (int i = 0; i < v; ++i) {
      for (int j = 0; j < cols; ++j) sys.set(row, i * cols + j, 1);
      ++row;
    }
  return kernel_basis(sys);
}

// Walks every member of span(basis) as a flat vector, amortized O(len) per
// member via prefix partial sums.  fn returns false to stop early.
template <class Fn>
void for_each_span_member(const std::vector<std::vector<i64>>& basis, i64 p, int len, Fn&& fn) {
  const int d = static_cast<int>(basis.size());
  if (d == 0) {
    std::vector<i64> zero(len, 0);
    fn(zero);
    return;
  }
  std::vector<std::vector<i64>> prefix(static_cast<size_t>(d) + 1, std::vector<i64>(len, 0));
  std::vector<i64> digits(d, 0);
  if (!fn(prefix[d])) return;
  while (true) {
    int pos = d - 1;
    while (pos >= 0 && digits[pos] == p - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
    auto& next = prefix[pos + 1];
    const auto& base = prefix[pos];
    const auto& vec = basis[pos];
    for (int i = 0; i < len; ++i) next[i] = (base[i] + digits[pos] * vec[i]) % p;
    for (int k = pos + 1; k < d; ++k) prefix[k + 1] = prefix[k];
    if (!fn(prefix[d])) return;
  }
}

i64 span_size_checked(size_t dim, i64 p, i64 ceiling, const char* what) {
  __int128 n = 1;
  for (size_t i = 0; i < dim; ++i) {
    n *= p;
    if (n > ceiling) throw CeilingExceeded(std::string(what) + ": solution space exceeds ceiling");
  }
  return static_cast<i64>(n);
}

int flat_rank(const std::vector<i64>& flat, int v, int cols, i64 p) {
  // Row reduce a copy; v <= 3 so this stays tiny.
  i64 m[3][8];
  for (int i = 0; i < v; ++i)
    for (int j = 0; j < cols; ++j) m[i][j] = flat[static_cast<size_t>(i) * cols + j] % p;
  int rank = 0;
  for (int col = 0; col < cols && rank < v; ++col) {
    int pivot = -1;
    for (int i = rank; i < v; ++i)
      if (m[i][col] % p != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(m[pivot][j], m[rank][j]);
    i64 inv = mod_inv(m[rank][col], p);
    for (int j = 0; j < cols; ++j) m[rank][j] = (m[rank][j] % p + p) * inv % p;
    for (int i = 0; i < v; ++i) {
      if (i == rank) continue;
      i64 f = (m[i][col] % p + p) % p;
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j) m[i][j] = ((m[i][j] - f * m[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

bool columns_nonzero(const std::vector<i64>& flat, int v, int cols, i64 p) {
  for (int j = 0; j < cols; ++j) {
    bool nz = false;
    for (int i = 0; i < v; ++i)
      if (flat[static_cast<size_t>(i) * cols + j] % p != 0) nz = true;
    if (!nz) return false;
  }
  return true;
}

bool flat_invertible(const std::vector<i64>& flat, int v, i64 p) {
  return flat_rank(flat, v, v, p) == v;
}

std::vector<std::pair<FpMatrix, FpMatrix>> gen_equations(const PermSubgroup& hp,
                                                         const std::vector<FpMatrix>& q, i64 p) {
  std::vector<std::pair<FpMatrix, FpMatrix>> eqs;
  for (const auto& gen : minimal_generators(hp))
    eqs.push_back({q[element_index(hp, gen)], perm_matrix(gen, p)});
  return eqs;
}

bool exists_with(const std::vector<std::vector<i64>>& basis, i64 p, int len,
                 const std::function<bool(const std::vector<i64>&)>& pred, i64 ceiling,
                 const char* what) {
  // Exhaustive when the space is small; otherwise probe a deterministic
  // sample (basis vectors and pairwise sums) before escalating to the full
  // search, which the ceiling bounds.
  __int128 n = 1;
  bool small = true;
  for (size_t i = 0; i < basis.size(); ++i) {
    n *= p;
    if (n > (1 << 20)) {
      small = false;
      break;
    }
  }
  if (!small) {
    std::vector<i64> cand(len, 0);
    for (size_t i = 0; i < basis.size(); ++i)
      for (size_t j = i; j < basis.size(); ++j) {
        for (int k = 0; k < len; ++k) cand[k] = (basis[i][k] + (i == j ? 0 : basis[j][k])) % p;
        if (pred(cand)) return true;
      }
    span_size_checked(basis.size(), p, ceiling, what);
  }
  bool found = false;
  for_each_span_member(basis, p, len, [&](const std::vector<i64>& x) {
    if (pred(x)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace

i64 fixed_set_size(const PermSubgroup& hprime, const std::vector<FpMatrix>& q, int v, int r,
                   i64 p, const Ceilings& ceilings) {
  auto basis = intertwiner_kernel(v, r, p, gen_equations(hprime, q, p), true);
  span_size_checked(basis.size(), p, ceilings.enumeration, "fixed_set_size");
  i64 count = 0;
  for_each_span_member(basis, p, v * r, [&](const std::vector<i64>& x) {
    if (columns_nonzero(x, v, r, p) && flat_rank(x, v, r, p) == v) ++count;
    return true;
  });
  return count;
}

i64 fixed_set_size(const SubgroupRecord& rec, int v, int r, i64 p, const Ceilings& ceilings) {
  return fixed_set_size(rec.hprime, rec.q, v, r, p, ceilings);
}

FixedPointReport has_fixed_point(const PermSubgroup& hprime, const std::vector<FpMatrix>& q,
                                 int v, int r, i64 p, const Ceilings& ceilings) {
  FixedPointReport rep;
  rep.fixed_count = fixed_set_size(hprime, q, v, r, p, ceilings);
  rep.fixes = rep.fixed_count > 0;

  auto basis = intertwiner_kernel(v, r, p, gen_equations(hprime, q, p), true);
  rep.dominated = exists_with(
      basis, p, v * r,
      [&](const std::vector<i64>& x) { return flat_rank(x, v, r, p) == v; },
      ceilings.enumeration, "has_fixed_point");

  // One flag per orbit of H' on the branch points: does q share an
  // irreducible with the orbit's permutation representation?  Equivalent to
  // a nonzero intertwiner space.
  auto gens = minimal_generators(hprime);
  for (const auto& block : hprime.orbit_partition()) {
    const int len = static_cast<int>(block.size());
    std::vector<int> position(hprime.degree, -1);
    for (int i = 0; i < len; ++i) position[block[i] - 1] = i;
    std::vector<std::pair<FpMatrix, FpMatrix>> eqs;
    for (const auto& gen : gens) {
      FpMatrix pm(len, len, p);
      for (int i = 0; i < len; ++i) pm.set(i, position[gen(block[i] - 1)], 1);
      eqs.push_back({q[element_index(hprime, gen)], pm});
    }
    auto sub = intertwiner_kernel(v, len, p, eqs, false);
    rep.orbit_common_irreducible.push_back(!sub.empty());
  }
  return rep;
}

i64 normalizer_size(const PermSubgroup& hprime, const std::vector<FpMatrix>& q, int v, i64 p,
                    const Ceilings& ceilings) {
  const int r = hprime.degree;
  if (hprime.order() == 1) return gl_order(v, p) * [=] {
    i64 f = 1;
    for (int i = 2; i <= r; ++i) f *= i;
    return f;
  }();
  // |Z|: invertible elements of the commutant of q.
  std::vector<std::pair<FpMatrix, FpMatrix>> comm;
  for (const auto& gen : minimal_generators(hprime)) {
    const auto& m = q[element_index(hprime, gen)];
    comm.push_back({m, m});
  }
  auto zbasis = intertwiner_kernel(v, v, p, comm, false);
  span_size_checked(zbasis.size(), p, ceilings.enumeration, "normalizer_size");
  i64 zsize = 0;
  for_each_span_member(zbasis, p, v * v, [&](const std::vector<i64>& x) {
    if (flat_invertible(x, v, p)) ++zsize;
    return true;
  });
  // |N''|: normalizer elements whose twist of q stays equivalent over F_p.
  auto nprime = normalizer_in_sym(hprime);
  auto gens = minimal_generators(hprime);
  i64 n2 = 0;
  for (const auto& alpha : nprime.elements) {
    std::vector<std::pair<FpMatrix, FpMatrix>> eqs;
    for (const auto& gen : gens) {
      FpMatrix twisted = q[element_index(hprime, conj_elem(gen, alpha.inverse()))];
      eqs.push_back({twisted, q[element_index(hprime, gen)]});
    }
    auto basis = intertwiner_kernel(v, v, p, eqs, false);
    if (exists_with(
            basis, p, v * v,
            [&](const std::vector<i64>& x) { return flat_invertible(x, v, p); },
            ceilings.enumeration, "normalizer_size"))
      ++n2;
  }
  return zsize * n2;
}

// ---------------------------------------------------------------------------
// Point stabilizers.

SubgroupRecord point_stabilizer(const OmegaMatrix& x, const Ceilings& ceilings) {
  const int v = x.x.rows(), r = x.x.cols();
  const i64 p = x.x.modulus();
  // Independent columns of X, once.
  std::vector<int> pivots;
  x.x.rref(&pivots);
  FpMatrix xs(v, v, p);
  for (int k = 0; k < v; ++k)
    for (int i = 0; i < v; ++i) xs.set(i, k, x.x.at(i, pivots[k]));
  auto xs_inv = xs.inverse();
  if (!xs_inv) throw std::logic_error("point_stabilizer: pivot columns not invertible");

  std::vector<Perm> alphas;
  std::vector<FpMatrix> mats;
  for (const auto& alpha : all_perms(r)) {
    FpMatrix n(v, v, p);
    for (int k = 0; k < v; ++k)
      for (int i = 0; i < v; ++i) n.set(i, k, x.x.at(i, alpha(pivots[k])));
    auto n_inv = n.inverse();
    if (!n_inv) continue;
    FpMatrix g = xs * (*n_inv);
    bool ok = true;
    for (int j = 0; j < r && ok; ++j)
      for (int i = 0; i < v && ok; ++i) {
        i64 acc = 0;
        for (int k = 0; k < v; ++k) acc += g.at(i, k) * x.x.at(k, alpha(j));
        if (((acc % p) + p) % p != x.x.at(i, j)) ok = false;
      }
    if (!ok) continue;
    alphas.push_back(alpha);
    mats.push_back(std::move(g));
  }
  SubgroupRecord rec;
  rec.hprime.degree = r;
  // all_perms is sorted, so the element list is sorted already.
  rec.hprime.elements = alphas;
  rec.hprime.generators = minimal_generators(rec.hprime);
  rec.q = std::move(mats);
  rec.order = rec.hprime.order();
  rec.fixed_set_size = fixed_set_size(rec.hprime, rec.q, v, r, p, ceilings);
  rec.normalizer_size = normalizer_size(rec.hprime, rec.q, v, p, ceilings);
  return rec;
}

// ---------------------------------------------------------------------------
// Packed Omega space: BFS orbits under GL(v,p) x Sigma_r.

namespace {

struct OmegaSpace {
  int v, r;
  i64 p;
  u64 colsz, space;
  std::vector<u32> col_add, col_neg;
  std::vector<u8> col_digits;  // colsz * v
  std::vector<i64> inv_mod;    // p entries

  struct OGen {
    bool is_perm = false;
    std::vector<u32> colmap;  // !is_perm
    Perm alpha;               // is_perm
  };
  std::vector<OGen> gens;

  OmegaSpace(int v_, int r_, i64 p_, const Ceilings& ceilings) : v(v_), r(r_), p(p_) {
    if (v < 1 || r < 2) throw std::invalid_argument("omega space: bad shape");
    colsz = 1;
    for (int i = 0; i < v; ++i) colsz *= static_cast<u64>(p);
    unsigned __int128 sp = 1;
    for (int i = 0; i + 1 < r; ++i) {
      sp *= colsz;
      if (sp > ceilings.oracle)
        throw CeilingExceeded("omega oracle: p^(v(r-1)) exceeds the oracle ceiling");
    }
    space = static_cast<u64>(sp);
    if (colsz * colsz > (1ULL << 26))
      throw CeilingExceeded("omega oracle: column addition table too large");

    col_digits.resize(colsz * v);
    for (u64 c = 0; c < colsz; ++c) {
      u64 rest = c;
      for (int i = v; i-- > 0;) {
        col_digits[c * v + i] = static_cast<u8>(rest % p);
        rest /= p;
      }
    }
    col_add.resize(colsz * colsz);
    col_neg.resize(colsz);
    for (u64 a = 0; a < colsz; ++a) {
      u64 negcode = 0;
      for (int i = 0; i < v; ++i) negcode = negcode * p + (p - col_digits[a * v + i]) % p;
      col_neg[a] = static_cast<u32>(negcode);
      for (u64 b = 0; b < colsz; ++b) {
        u64 code = 0;
        for (int i = 0; i < v; ++i)
          code = code * p + (col_digits[a * v + i] + col_digits[b * v + i]) % p;
        col_add[a * colsz + b] = static_cast<u32>(code);
      }
    }
    inv_mod.assign(p, 0);
    for (i64 a = 1; a < p; ++a) inv_mod[a] = mod_inv(a, p);

    // GL generators: all transvections plus one primitive scalar.
    auto add_colmap = [&](const std::function<void(i64*)>& f) {
      OGen gen;
      gen.colmap.resize(colsz);
      std::vector<i64> d(v);
      for (u64 c = 0; c < colsz; ++c) {
        for (int i = 0; i < v; ++i) d[i] = col_digits[c * v + i];
        f(d.data());
        u64 code = 0;
        for (int i = 0; i < v; ++i) code = code * p + ((d[i] % p) + p) % p;
        gen.colmap[c] = static_cast<u32>(code);
      }
      gens.push_back(std::move(gen));
    };
    for (int i = 0; i < v; ++i)
      for (int j = 0; j < v; ++j) {
        if (i == j) continue;
        add_colmap([i, j](i64* d) { d[i] += d[j]; });
      }
    i64 root = 1;
    for (i64 g = 2; g < p; ++g) {
      i64 acc = g, ord = 1;
      while (acc != 1) {
        acc = acc * g % p;
        ++ord;
      }
      if (ord == p - 1) {
        root = g;
        break;
      }
    }
    if (root != 1) add_colmap([root](i64* d) { d[0] *= root; });
    // Sigma_r generators: adjacent transposition and the full cycle.
    {
      OGen t;
      t.is_perm = true;
      std::vector<int> img(r);
      std::iota(img.begin(), img.end(), 0);
      std::swap(img[0], img[1]);
      t.alpha = Perm::from_images0(img);
      gens.push_back(std::move(t));
      if (r > 2) {
        OGen c;
        c.is_perm = true;
        std::vector<int> cyc(r);
        for (int i = 0; i < r; ++i) cyc[i] = (i + 1) % r;
        c.alpha = Perm::from_images0(cyc);
        gens.push_back(std::move(c));
      }
    }
  }

  // cols must have r slots; fills the implicit last column.
  void decode(u64 idx, u32* cols) const {
    for (int j = r - 1; j-- > 0;) {
      cols[j] = static_cast<u32>(idx % colsz);
      idx /= colsz;
    }
    u32 sum = 0;
    for (int j = 0; j + 1 < r; ++j) sum = col_add[static_cast<u64>(sum) * colsz + cols[j]];
    cols[r - 1] = col_neg[sum];
  }

  u64 encode(const u32* cols) const {
    u64 idx = 0;
    for (int j = 0; j + 1 < r; ++j) idx = idx * colsz + cols[j];
    return idx;
  }

  bool valid(const u32* cols) const {
    for (int j = 0; j < r; ++j)
      if (cols[j] == 0) return false;
    // rank via incremental reduction of the column digit vectors
    i64 basis[3][3];
    bool has_lead[3] = {false, false, false};
    int rank = 0;
    for (int j = 0; j < r && rank < v; ++j) {
      i64 w[3];
      const u8* src = &col_digits[static_cast<u64>(cols[j]) * v];
      for (int i = 0; i < v; ++i) w[i] = src[i];
      for (int l = 0; l < v; ++l) {
        if (w[l] == 0) continue;
        if (has_lead[l]) {
          i64 f = w[l];
          for (int i = l; i < v; ++i) {
            w[i] -= f * basis[l][i] % p;
            w[i] %= p;
            if (w[i] < 0) w[i] += p;
          }
        } else {
          i64 inv = inv_mod[w[l]];
          for (int i = l; i < v; ++i) basis[l][i] = w[i] * inv % p;
          has_lead[l] = true;
          ++rank;
          break;
        }
      }
    }
    return rank == v;
  }

  void apply_gen(const OGen& g, u32* cols) const {
    if (g.is_perm) {
      u32 tmp[8];
      for (int j = 0; j < r; ++j) tmp[j] = cols[g.alpha(j)];
      for (int j = 0; j < r; ++j) cols[j] = tmp[j];
    } else {
      for (int j = 0; j < r; ++j) cols[j] = g.colmap[cols[j]];
    }
  }

  FpMatrix to_matrix(u64 idx) const {
    std::vector<u32> cols(r);
    decode(idx, cols.data());
    FpMatrix m(v, r, p);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < v; ++i) m.set(i, j, col_digits[static_cast<u64>(cols[j]) * v + i]);
    return m;
  }
};

struct OmegaScan {
  i64 orbit_count = 0;
  std::vector<u64> seeds;
  u64 valid_count = 0;
};

OmegaScan scan_omega(const OmegaSpace& os) {
  OmegaScan out;
  std::vector<u64> bits((os.space + 63) / 64, 0);
  auto test = [&](u64 i) { return (bits[i >> 6] >> (i & 63)) & 1; };
  auto mark = [&](u64 i) { bits[i >> 6] |= 1ULL << (i & 63); };
  std::vector<u32> cols(os.r), tmp(os.r);
  std::vector<u32> frontier;
  for (u64 idx = 0; idx < os.space; ++idx) {
    if (test(idx)) {
      ++out.valid_count;
      continue;
    }
    os.decode(idx, cols.data());
    if (!os.valid(cols.data())) continue;
    ++out.valid_count;
    out.seeds.push_back(idx);
    ++out.orbit_count;
    mark(idx);
    frontier.clear();
    frontier.push_back(static_cast<u32>(idx));
    size_t head = 0;
    while (head < frontier.size()) {
      u64 cur = frontier[head++];
      os.decode(cur, cols.data());
      for (const auto& gen : os.gens) {
        tmp = cols;
        os.apply_gen(gen, tmp.data());
        u64 nxt = os.encode(tmp.data());
        if (!test(nxt)) {
          mark(nxt);
          frontier.push_back(static_cast<u32>(nxt));
        }
      }
    }
  }
  return out;
}

}  // namespace

i64 orbit_count_oracle(int v, int r, i64 p, const Ceilings& ceilings) {
  OmegaSpace os(v, r, p, ceilings);
  return scan_omega(os).orbit_count;
}

// ---------------------------------------------------------------------------
// Stabilizer classes and the strata report.

namespace {

struct RecordContext {
  int v, r;
  i64 p;
  SubgroupClassTable table;
  std::vector<Perm> sym;
};

// Conjugates a record so its permutation part equals the class-table
// representative.
SubgroupRecord normalize_record(const RecordContext& ctx, const PermSubgroup& hp,
                                const std::vector<FpMatrix>& q) {
  SubgroupRecord rec;
  int idx = ctx.table.class_index(hp);
  if (idx < 0) throw std::logic_error("record: unknown permutation class");
  const PermSubgroup& rep = ctx.table.classes[idx].representative;
  for (const auto& alpha : ctx.sym) {
    if (!(conjugate(hp, alpha) == rep)) continue;
    rec.hprime = rep;
    rec.hprime.generators = minimal_generators(rep);
    Perm ainv = alpha.inverse();
    rec.q.clear();
    for (const auto& gamma : rep.elements)
      rec.q.push_back(q[element_index(hp, conj_elem(gamma, ainv))]);
    rec.order = rep.order();
    rec.perm_class_index = idx;
    return rec;
  }
  throw std::logic_error("record: conjugator not found");
}

bool same_class(const RecordContext& ctx, const SubgroupRecord& a, const SubgroupRecord& b,
                const Ceilings& ceilings) {
  if (a.order != b.order || a.perm_class_index != b.perm_class_index) return false;
  // Both permutation parts equal the class representative, so it suffices
  // to scan its normalizer for a twist making the q tables equivalent.
  auto gens = minimal_generators(a.hprime);
  auto nprime = normalizer_in_sym(a.hprime);
  for (const auto& alpha : nprime.elements) {
    std::vector<std::pair<FpMatrix, FpMatrix>> eqs;
    for (const auto& gen : gens) {
      FpMatrix lhs = b.q[element_index(b.hprime, conj_elem(gen, alpha))];
      eqs.push_back({lhs, a.q[element_index(a.hprime, gen)]});
    }
    auto basis = intertwiner_kernel(ctx.v, ctx.v, ctx.p, eqs, false);
    if (exists_with(
            basis, ctx.p, ctx.v * ctx.v,
            [&](const std::vector<i64>& x) { return flat_invertible(x, ctx.v, ctx.p); },
            ceilings.enumeration, "record conjugacy"))
      return true;
  }
  return false;
}

std::vector<i64> canonical_trace_key(const SubgroupRecord& rec, i64 p) {
  auto lift = [p](i64 t) { return t > p / 2 ? t - p : t; };
  auto nprime = normalizer_in_sym(rec.hprime);
  std::vector<i64> best;
  for (const auto& alpha : nprime.elements) {
    std::vector<i64> key;
    Perm ainv = alpha.inverse();
    for (const auto& e : rec.hprime.elements)
      key.push_back(lift(rec.q[element_index(rec.hprime, conj_elem(e, ainv))].trace()));
    if (best.empty() || key > best) best = key;
  }
  return best;
}

std::string record_label(const RecordContext& ctx, const SubgroupRecord& rec) {
  std::ostringstream os;
  os << ctx.table.classes[rec.perm_class_index].name;
  os << "[tr";
  for (i64 t : canonical_trace_key(rec, ctx.p)) os << " " << t;
  os << "]";
  return os.str();
}

// All subgroups of a small permutation group, one entry each.
std::vector<PermSubgroup> subgroups_of(const PermSubgroup& h) {
  std::map<std::vector<u64>, PermSubgroup> found;
  auto key = [](const PermSubgroup& s) {
    std::vector<u64> k;
    for (const auto& e : s.elements) k.push_back(e.pack());
    return k;
  };
  PermSubgroup trivial = closure(h.degree, {});
  found[key(trivial)] = trivial;
  std::vector<PermSubgroup> frontier{trivial};
  while (!frontier.empty()) {
    std::vector<PermSubgroup> next;
    for (const auto& sub : frontier)
      for (const auto& e : h.elements) {
        if (sub.contains(e)) continue;
        std::vector<Perm> gens = sub.generators;
        gens.push_back(e);
        PermSubgroup bigger = closure(h.degree, gens);
        if (found.emplace(key(bigger), bigger).second) next.push_back(bigger);
      }
    frontier = std::move(next);
  }
  std::vector<PermSubgroup> out;
  for (auto& [_, s] : found) out.push_back(std::move(s));
  return out;
}

void sort_records(std::vector<SubgroupRecord>& records, i64 p) {
  std::vector<std::vector<i64>> keys(records.size());
  for (size_t i = 0; i < records.size(); ++i) keys[i] = canonical_trace_key(records[i], p);
  std::vector<size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (records[a].order != records[b].order) return records[a].order < records[b].order;
    if (records[a].perm_class_index != records[b].perm_class_index)
      return records[a].perm_class_index < records[b].perm_class_index;
    if (keys[a] != keys[b]) return keys[a] > keys[b];
    std::vector<i64> fa, fb;
    for (const auto& m : records[a].q) fa.insert(fa.end(), m.entries().begin(), m.entries().end());
    for (const auto& m : records[b].q) fb.insert(fb.end(), m.entries().begin(), m.entries().end());
    return fa < fb;
  });
  std::vector<SubgroupRecord> sorted;
  for (size_t i : order) sorted.push_back(std::move(records[i]));
  records = std::move(sorted);
}

void finish_record(const RecordContext& ctx, SubgroupRecord& rec, const Ceilings& ceilings) {
  rec.fixed_set_size = fixed_set_size(rec.hprime, rec.q, ctx.v, ctx.r, ctx.p, ceilings);
  rec.normalizer_size = normalizer_size(rec.hprime, rec.q, ctx.v, ctx.p, ceilings);
  rec.label = record_label(ctx, rec);
}

void check_structured_scope(int v, int r, i64 p) {
  if (r < 2 || r > 5) throw OutOfScope("stabilizer classes: branch count must be 2..5");
  if (p <= r)
    throw OutOfScope("stabilizer classes: singular prime (p <= r); use the brute-force oracle");
  if (v < 1 || v >= r) throw OutOfScope("stabilizer classes: need 1 <= v < r");
}

}  // namespace

std::vector<SubgroupRecord> stabilizer_classes(int v, int r, i64 p, const Ceilings& ceilings) {
  check_structured_scope(v, r, p);
  RecordContext ctx{v, r, p, subgroup_classes(r), all_perms(r)};

  OmegaSpace os(v, r, p, ceilings);
  auto scan = scan_omega(os);

  std::vector<SubgroupRecord> classes;
  for (u64 seed : scan.seeds) {
    OmegaMatrix x{os.to_matrix(seed)};
    // Full stabilizer of the orbit representative, then every subgroup of
    // it (the permutation part determines the matrix part injectively).
    std::vector<Perm> alphas;
    std::vector<FpMatrix> mats;
    {
      SubgroupRecord full = point_stabilizer(x, ceilings);
      alphas = full.hprime.elements;
      mats = full.q;
    }
    PermSubgroup hp;
    hp.degree = r;
    hp.elements = alphas;
    hp.generators = minimal_generators(hp);
    for (const auto& sub : subgroups_of(hp)) {
      std::vector<FpMatrix> subq;
      for (const auto& e : sub.elements) subq.push_back(mats[element_index(hp, e)]);
      SubgroupRecord rec = normalize_record(ctx, sub, subq);
      bool known = false;
      for (const auto& existing : classes)
        if (same_class(ctx, existing, rec, ceilings)) {
          known = true;
          break;
        }
      if (!known) classes.push_back(std::move(rec));
    }
  }
  for (auto& rec : classes) finish_record(ctx, rec, ceilings);
  sort_records(classes, p);
  return classes;
}

std::vector<SubgroupRecord> stabilizer_classes_constructive(int v, int r, i64 p,
                                                            const Ceilings& ceilings) {
  check_structured_scope(v, r, p);
  RecordContext ctx{v, r, p, subgroup_classes(r), all_perms(r)};

  // Matrices of each multiplicative order, collected once.
  std::map<i64, std::vector<FpMatrix>> matrices_of_order_dividing;
  auto matrices_for = [&](i64 n) -> const std::vector<FpMatrix>& {
    auto it = matrices_of_order_dividing.find(n);
    if (it != matrices_of_order_dividing.end()) return it->second;
    std::vector<FpMatrix> out;
    for_each_gl(
        v, p,
        [&](const FpMatrix& m) {
          FpMatrix acc = m;
          for (i64 k = 1; k < n; ++k) acc = acc * m;
          if (acc == FpMatrix::identity(v, p)) out.push_back(m);
        },
        ceilings.enumeration);
    return matrices_of_order_dividing.emplace(n, std::move(out)).first->second;
  };

  std::vector<SubgroupRecord> classes;
  for (const auto& cls : ctx.table.classes) {
    const PermSubgroup& hp = cls.representative;
    auto gens = minimal_generators(hp);
    // Assign a matrix to every generator, then verify the assignment closes
    // into a homomorphism by walking the pair closure.
    std::vector<const std::vector<FpMatrix>*> pools;
    for (const auto& gen : gens) pools.push_back(&matrices_for(gen.order()));
    std::vector<size_t> pick(gens.size(), 0);
    bool done = gens.empty();
    if (gens.empty()) {
      // trivial group
      SubgroupRecord rec = normalize_record(ctx, hp, {FpMatrix::identity(v, p)});
      if (has_fixed_point(rec.hprime, rec.q, v, r, p, ceilings).fixes)
        classes.push_back(std::move(rec));
      continue;
    }
    while (!done) {
      // Close the generator assignment into a table, if consistent.
      std::map<Perm, FpMatrix> table;
      table.emplace(Perm(r), FpMatrix::identity(v, p));
      std::vector<Perm> frontier{Perm(r)};
      bool consistent = true;
      while (!frontier.empty() && consistent) {
        std::vector<Perm> next;
        for (const auto& e : frontier) {
          for (size_t gi = 0; gi < gens.size(); ++gi) {
            Perm prod = e.then(gens[gi]);
            FpMatrix mat = table.at(e) * (*pools[gi])[pick[gi]];
            auto it = table.find(prod);
            if (it == table.end()) {
              table.emplace(prod, mat);
              next.push_back(prod);
            } else if (!(it->second == mat)) {
              consistent = false;
              break;
            }
          }
          if (!consistent) break;
        }
        frontier = std::move(next);
      }
      if (consistent && static_cast<i64>(table.size()) == hp.order()) {
        std::vector<FpMatrix> q;
        for (const auto& e : hp.elements) q.push_back(table.at(e));
        SubgroupRecord rec = normalize_record(ctx, hp, q);
        if (has_fixed_point(rec.hprime, rec.q, v, r, p, ceilings).fixes) {
          bool known = false;
          for (const auto& existing : classes)
            if (same_class(ctx, existing, rec, ceilings)) {
              known = true;
              break;
            }
          if (!known) classes.push_back(std::move(rec));
        }
      }
      size_t pos = pick.size();
      while (pos > 0 && pick[pos - 1] + 1 == pools[pos - 1]->size()) pick[--pos] = 0;
      if (pos == 0) break;
      ++pick[pos - 1];
    }
  }
  for (auto& rec : classes) finish_record(ctx, rec, ceilings);
  sort_records(classes, p);
  return classes;
}

bool stabilizer_discovery_agrees(int v, int r, i64 p, const Ceilings& ceilings) {
  auto scan = stabilizer_classes(v, r, p, ceilings);
  auto built = stabilizer_classes_constructive(v, r, p, ceilings);
  if (scan.size() != built.size()) return false;
  RecordContext ctx{v, r, p, subgroup_classes(r), all_perms(r)};
  for (size_t i = 0; i < scan.size(); ++i)
    if (!same_class(ctx, scan[i], built[i], ceilings)) return false;
  return true;
}

StrataReport build_strata_report(const std::vector<SubgroupRecord>& classes, int v, int r, i64 p,
                                 const Ceilings& ceilings) {
  StrataReport rep;
  rep.v = v;
  rep.r = r;
  rep.p = p;
  rep.classes = classes;
  const int s = static_cast<int>(classes.size());
  i64 rfact = 1;
  for (int i = 2; i <= r; ++i) rfact *= i;
  rep.group_order = gl_order(v, p) * rfact;
  rep.omega_size = omega_count(v, r, p);
  rep.total = 0;
  if (s == 0) return rep;

  RecordContext ctx{v, r, p, subgroup_classes(r), all_perms(r)};

  rep.d_matrix.assign(s, std::vector<i64>(s, 0));
  for (int j = 0; j < s; ++j) {
    for (const auto& sub : subgroups_of(classes[j].hprime)) {
      std::vector<FpMatrix> subq;
      for (const auto& e : sub.elements)
        subq.push_back(classes[j].q[element_index(classes[j].hprime, e)]);
      SubgroupRecord rec = normalize_record(ctx, sub, subq);
      int match = -1;
      for (int i = 0; i < s; ++i)
        if (same_class(ctx, classes[i], rec, ceilings)) {
          match = i;
          break;
        }
      if (match < 0)
        throw PipelineInconsistency("strata: subgroup of a class is missing from the class list");
      ++rep.d_matrix[match][j];
    }
  }

  rep.t_sizes.resize(s);
  rep.n_sizes.resize(s);
  rep.s_sizes.resize(s);
  rep.l.resize(s);
  for (int i = 0; i < s; ++i) {
    rep.t_sizes[i] = classes[i].order;
    rep.n_sizes[i] = classes[i].normalizer_size;
    if (rep.group_order % rep.n_sizes[i] != 0)
      throw PipelineInconsistency("strata: normalizer order does not divide |G|");
    rep.s_sizes[i] = rep.group_order / rep.n_sizes[i];
    rep.l[i] = classes[i].fixed_set_size;
  }

  rep.u_matrix.assign(s, std::vector<i64>(s, 0));
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      i64 num = rep.d_matrix[i][j] * rep.s_sizes[j];
      if (num % rep.s_sizes[i] != 0)
        throw PipelineInconsistency("strata: u entries are not integral");
      rep.u_matrix[i][j] = num / rep.s_sizes[i];
    }
  for (int i = 0; i < s; ++i) {
    if (rep.u_matrix[i][i] != 1 || rep.d_matrix[i][i] != 1)
      throw PipelineInconsistency("strata: diagonal of D/U must be 1");
    for (int j = 0; j < i; ++j)
      if (rep.u_matrix[i][j] != 0)
        throw PipelineInconsistency("strata: ordering is not containment-compatible");
  }

  // L = U L°  (U upper unitriangular) -> back substitution.
  rep.l_iso.assign(s, 0);
  for (int i = s - 1; i >= 0; --i) {
    i64 acc = rep.l[i];
    for (int j = i + 1; j < s; ++j) acc -= rep.u_matrix[i][j] * rep.l_iso[j];
    rep.l_iso[i] = acc;
    if (acc < 0) throw PipelineInconsistency("strata: negative isotropic stratum size");
  }
  rep.e_strata.resize(s);
  rep.orbit_counts.resize(s);
  i64 esum = 0;
  for (int i = 0; i < s; ++i) {
    rep.e_strata[i] = rep.s_sizes[i] * rep.l_iso[i];
    esum += rep.e_strata[i];
    i64 num = rep.t_sizes[i] * rep.e_strata[i];
    if (num % rep.group_order != 0)
      throw PipelineInconsistency("strata: orbit count is not integral");
    rep.orbit_counts[i] = num / rep.group_order;
    rep.total += rep.orbit_counts[i];
  }
  if (esum != rep.omega_size)
    throw PipelineInconsistency("strata: equisymmetric strata do not partition Omega");
  return rep;
}

StrataReport build_strata_report(int v, int r, i64 p, const Ceilings& ceilings) {
  return build_strata_report(stabilizer_classes(v, r, p, ceilings), v, r, p, ceilings);
}

}  // namespace mcg
