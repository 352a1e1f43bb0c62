#include "mcg/genvec.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tuple_space.hpp"

namespace mcg {

GeneratingVector make_generating_vector(const AbelianGroup& g, const Signature& sig,
                                        std::vector<AbElement> a, std::vector<AbElement> b,
                                        std::vector<AbElement> c) {
  if (static_cast<i64>(a.size()) != sig.orbit_genus ||
      static_cast<i64>(b.size()) != sig.orbit_genus ||
      static_cast<int>(c.size()) != sig.branch_count())
    throw std::invalid_argument("generating vector shape does not match signature");
  for (auto* part : {&a, &b, &c})
    for (auto& e : *part)
      if (static_cast<int>(e.c.size()) != g.rank())
        throw std::invalid_argument("element coordinate count does not match group rank");
  return GeneratingVector{g, sig, std::move(a), std::move(b), std::move(c)};
}

bool spans_group(const AbelianGroup& g, const std::vector<AbElement>& elems) {
  if (g.rank() == 0) return true;
  // <S> = G iff the images span G/qG for every prime q dividing exp(G).
  i64 e = g.exponent();
  std::vector<i64> qs;
  for (i64 q = 2; q <= e; ++q) {
    if (!is_prime(q) || e % q != 0) continue;
    qs.push_back(q);
  }
  for (i64 q : qs) {
    std::vector<int> rows;
    for (int i = 0; i < g.rank(); ++i)
      if (g.factor(i) % q == 0) rows.push_back(i);
    FpMatrix m(static_cast<int>(rows.size()), static_cast<int>(elems.size()), q);
    for (size_t i = 0; i < rows.size(); ++i)
      for (size_t j = 0; j < elems.size(); ++j) m.set(static_cast<int>(i), static_cast<int>(j), elems[j].c[rows[i]]);
    if (m.rank() != static_cast<int>(rows.size())) return false;
  }
  return true;
}

ValidityReport validate(const GeneratingVector& gv) {
  ValidityReport rep;
  for (int j = 0; j < gv.sig.branch_count(); ++j)
    if (gv.group.element_order(gv.c[j]) != gv.sig.periods[j]) rep.order_mismatch.push_back(j);
  AbElement sum = gv.group.zero();
  for (const auto& cj : gv.c) sum = gv.group.add(sum, cj);
  rep.sum_zero = gv.group.is_zero(sum);
  std::vector<AbElement> all;
  all.insert(all.end(), gv.a.begin(), gv.a.end());
  all.insert(all.end(), gv.b.begin(), gv.b.end());
  all.insert(all.end(), gv.c.begin(), gv.c.end());
  rep.surjective = spans_group(gv.group, all);
  return rep;
}

std::string move_to_string(const Move& m) {
  std::ostringstream os;
  switch (m.kind) {
    case MoveKind::HandleA: os << "A_" << m.i + 1 << "^" << m.k; break;
    case MoveKind::HandleB: os << "B_" << m.i + 1 << "^" << m.k; break;
    case MoveKind::HandleZ: os << "Z_" << m.i + 1 << "^" << m.k; break;
    case MoveKind::HandleR: os << "R_" << m.i + 1; break;
    case MoveKind::HandleS: os << "S_" << m.i + 1; break;
    case MoveKind::EllipticT: os << "T_" << m.j + 1; break;
    case MoveKind::MixedU: os << "U_" << m.i + 1 << "," << m.j + 1 << "^" << m.k; break;
    case MoveKind::MixedV: os << "V_" << m.i + 1 << "," << m.j + 1 << "^" << m.k; break;
  }
  return os.str();
}

GeneratingVector apply_move(const GeneratingVector& gv, const Move& m) {
  const auto& g = gv.group;
  const i64 rho = gv.sig.orbit_genus;
  const int r = gv.sig.branch_count();
  auto need_handle = [&](int i) {
    if (i < 0 || i >= rho) throw InvalidMove("handle index out of range");
  };
  auto need_handle_pair = [&](int i) {
    if (i < 0 || i + 1 >= rho) throw InvalidMove("handle pair index out of range");
  };
  auto need_branch = [&](int j) {
    if (j < 0 || j >= r) throw InvalidMove("branch index out of range");
  };
  GeneratingVector out = gv;
  switch (m.kind) {
    case MoveKind::HandleA:
      need_handle(m.i);
      out.b[m.i] = g.add(gv.b[m.i], g.scale(m.k, gv.a[m.i]));
      break;
    case MoveKind::HandleB:
      need_handle(m.i);
      out.a[m.i] = g.add(gv.a[m.i], g.scale(m.k, gv.b[m.i]));
      break;
    case MoveKind::HandleZ:
      need_handle_pair(m.i);
      out.a[m.i] = g.add(gv.a[m.i], g.scale(m.k, gv.a[m.i + 1]));
      out.b[m.i + 1] = g.sub(gv.b[m.i + 1], g.scale(m.k, gv.b[m.i]));
      break;
    case MoveKind::HandleR:
      need_handle(m.i);
      out.a[m.i] = gv.b[m.i];
      out.b[m.i] = g.neg(gv.a[m.i]);
      break;
    case MoveKind::HandleS:
      need_handle_pair(m.i);
      std::swap(out.a[m.i], out.a[m.i + 1]);
      std::swap(out.b[m.i], out.b[m.i + 1]);
      break;
    case MoveKind::EllipticT:
      need_branch(m.j);
      need_branch(m.j + 1);
      if (gv.sig.periods[m.j] != gv.sig.periods[m.j + 1])
        throw InvalidMove("elliptic swap requires equal periods");
      std::swap(out.c[m.j], out.c[m.j + 1]);
      break;
    case MoveKind::MixedU:
      need_handle(m.i);
      need_branch(m.j);
      out.b[m.i] = g.add(gv.b[m.i], g.scale(m.k, gv.c[m.j]));
      break;
    case MoveKind::MixedV:
      need_handle(m.i);
      need_branch(m.j);
      out.a[m.i] = g.add(gv.a[m.i], g.scale(m.k, gv.c[m.j]));
      break;
  }
  return out;
}

namespace {

// Subgroup of the tensor square spanned by { w_a (x) c - c (x) w_a } over
// the elliptic images c; the cup invariant is compared modulo this span.
std::set<std::vector<i64>> elliptic_relation_span(const AbelianGroup& g,
                                                  const std::vector<AbElement>& cs,
                                                  const Ceilings& ceilings) {
  std::set<std::vector<i64>> span;
  TensorSquareElement zero = tensor_zero(g);
  span.insert(zero.coords);
  if (cs.empty()) return span;
  std::vector<TensorSquareElement> gens;
  for (const auto& c : cs)
    for (int a = 0; a < g.rank(); ++a) {
      AbElement wa = g.generator(a);
      gens.push_back(tensor_sub(g, tensor_square(g, wa, c), tensor_square(g, c, wa)));
    }
  std::vector<std::vector<i64>> frontier{zero.coords};
  while (!frontier.empty()) {
    std::vector<std::vector<i64>> next;
    for (const auto& cur : frontier)
      for (const auto& gen : gens) {
        TensorSquareElement t{static_cast<int>(g.rank()), cur};
        auto sum = tensor_add(g, t, gen).coords;
        if (span.insert(sum).second) {
          next.push_back(std::move(sum));
          if (static_cast<i64>(span.size()) > ceilings.enumeration)
            throw CeilingExceeded("cup invariant: elliptic relation span too large");
        }
      }
    frontier = std::move(next);
  }
  return span;
}

TensorSquareElement coset_minimum(const AbelianGroup& g, const TensorSquareElement& raw,
                                  const std::set<std::vector<i64>>& span) {
  std::vector<i64> best;
  bool first = true;
  for (const auto& t : span) {
    auto cand = tensor_add(g, raw, TensorSquareElement{raw.t, t}).coords;
    if (first || cand < best) {
      best = std::move(cand);
      first = false;
    }
  }
  return TensorSquareElement{raw.t, best};
}

}  // namespace

CupInvariant cup_invariant(const GeneratingVector& gv, const Ceilings& ceilings) {
  const auto& g = gv.group;
  TensorSquareElement acc = tensor_zero(g);
  for (i64 i = 0; i < gv.sig.orbit_genus; ++i) {
    acc = tensor_add(g, acc, tensor_square(g, gv.a[i], gv.b[i]));
    acc = tensor_sub(g, acc, tensor_square(g, gv.b[i], gv.a[i]));
  }
  CupInvariant inv;
  inv.raw = acc;
  if (gv.sig.branch_count() == 0) {
    inv.canonical = acc;
  } else {
    auto span = elliptic_relation_span(g, gv.c, ceilings);
    inv.canonical = coset_minimum(g, acc, span);
  }
  return inv;
}

namespace {

std::set<std::vector<i64>> subgroup_generated(const AbelianGroup& g,
                                              const std::vector<AbElement>& gens) {
  std::set<std::vector<i64>> members{g.zero().c};
  std::vector<AbElement> frontier{g.zero()};
  while (!frontier.empty()) {
    std::vector<AbElement> next;
    for (const auto& cur : frontier)
      for (const auto& gen : gens) {
        AbElement s = g.add(cur, gen);
        if (members.insert(s.c).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  return members;
}

}  // namespace

bool cup_equivalent_mod_aut(const GeneratingVector& gv1, const GeneratingVector& gv2,
                            const Ceilings& ceilings) {
  if (!(gv1.group == gv2.group)) throw std::invalid_argument("cup comparison needs one group");
  const auto& g = gv1.group;
  CupInvariant c1 = cup_invariant(gv1, ceilings);
  CupInvariant c2 = cup_invariant(gv2, ceilings);
  const bool ramified = gv1.sig.branch_count() > 0 || gv2.sig.branch_count() > 0;
  std::set<std::vector<i64>> span2;
  std::set<std::vector<i64>> e1, e2;
  if (ramified) {
    span2 = elliptic_relation_span(g, gv2.c, ceilings);
    e1 = subgroup_generated(g, gv1.c);
    e2 = subgroup_generated(g, gv2.c);
  }
  bool found = false;
  for_each_automorphism(
      g,
      [&](const AbAutomorphism& theta) {
        if (found) return;
        if (ramified) {
          // theta must carry the elliptic span of gv1 onto that of gv2.
          if (e1.size() != e2.size()) return;
          for (const auto& x : e1)
            if (!e2.count(theta.apply(AbElement{x}).c)) return;
        }
        TensorSquareElement moved = tensor_apply(g, theta, c1.raw);
        if (ramified) {
          auto diff = tensor_sub(g, moved, c2.raw);
          if (span2.count(diff.coords)) found = true;
        } else if (moved == c2.raw) {
          found = true;
        }
      },
      ceilings.automorphisms);
  return found;
}

// ---------------------------------------------------------------------------
// Brute-force orbit oracle.

namespace detail {

TupleSpace::TupleSpace(const AbelianGroup& g, const Signature& s, const Ceilings& ceilings,
                       unsigned shuffle_seed)
    : group(g), sig(s) {
  rho = static_cast<int>(s.orbit_genus);
  r = s.branch_count();
  npos = 2 * rho + r;
  gsize = static_cast<u64>(g.order());
  if (npos == 0) throw std::invalid_argument("oracle: empty tuple space");
  if (g.rank() > 8) throw OutOfScope("oracle: group rank above 8 is not supported");
  unsigned __int128 sp = 1;
  for (int i = 0; i < npos; ++i) {
    sp *= gsize;
    if (sp > ceilings.oracle)
      throw CeilingExceeded("oracle: |G|^(2*rho+r) exceeds the oracle ceiling");
  }
  space = static_cast<u64>(sp);

  add.resize(gsize * gsize);
  neg.resize(gsize);
  order_of.resize(gsize);
  for (u64 x = 0; x < gsize; ++x) {
    AbElement ex = g.decode(x);
    neg[x] = static_cast<u32>(g.encode(g.neg(ex)));
    order_of[x] = g.element_order(ex);
    for (u64 y = 0; y < gsize; ++y)
      add[x * gsize + y] = static_cast<u32>(g.encode(g.add(ex, g.decode(y))));
  }

  // Prime views for the surjectivity test.
  i64 e = g.exponent();
  for (i64 q = 2; q <= e; ++q) {
    if (!is_prime(q) || e % q != 0) continue;
    PrimeView pv;
    pv.q = q;
    std::vector<int> rows;
    for (int i = 0; i < g.rank(); ++i)
      if (g.factor(i) % q == 0) rows.push_back(i);
    pv.dim = static_cast<int>(rows.size());
    pv.flat.resize(gsize * pv.dim);
    for (u64 x = 0; x < gsize; ++x) {
      AbElement ex = g.decode(x);
      for (int i = 0; i < pv.dim; ++i) pv.flat[x * pv.dim + i] = ex.c[rows[i]] % q;
    }
    pv.inv.resize(q);
    for (i64 a = 1; a < q; ++a) pv.inv[a] = mod_inv(a, q);
    primes.push_back(std::move(pv));
  }

  // Generators: a reduced move set whose closure equals the full one
  // (checked against the full set in the test suite), then Aut(G).
  auto push_move = [&](Move m) {
    TupleGen tg;
    tg.kind = TupleGen::Kind::Move;
    tg.move = m;
    gens.push_back(tg);
  };
  for (int i = 0; i < rho; ++i) push_move(Move{MoveKind::HandleA, i, 0, 1});
  for (int i = 0; i < rho; ++i) push_move(Move{MoveKind::HandleR, i, 0, 1});
  for (int i = 0; i + 1 < rho; ++i) push_move(Move{MoveKind::HandleZ, i, 0, 1});
  for (int i = 0; i + 1 < rho; ++i) push_move(Move{MoveKind::HandleS, i, 0, 1});
  // Any permutation of equal-period branch points is admissible, so take
  // all equal-period transpositions directly.
  for (int j = 0; j < r; ++j)
    for (int k = j + 1; k < r; ++k)
      if (s.periods[j] == s.periods[k]) {
        TupleGen tg;
        tg.kind = TupleGen::Kind::CSwap;
        tg.j1 = j;
        tg.j2 = k;
        gens.push_back(tg);
      }
  for (int i = 0; i < rho; ++i)
    for (int j = 0; j < r; ++j) {
      push_move(Move{MoveKind::MixedU, i, j, 1});
      push_move(Move{MoveKind::MixedV, i, j, 1});
    }
  aut_gens = automorphism_generators(g, ceilings.automorphisms);
  for (size_t ai = 0; ai < aut_gens.size(); ++ai) {
    std::vector<u32> perm(gsize);
    for (u64 x = 0; x < gsize; ++x)
      perm[x] = static_cast<u32>(g.encode(aut_gens[ai].apply(g.decode(x))));
    aut_perm.push_back(std::move(perm));
    TupleGen tg;
    tg.kind = TupleGen::Kind::Aut;
    tg.aut_index = static_cast<int>(ai);
    gens.push_back(tg);
  }
  if (shuffle_seed != 0) {
    // Deterministic reordering; the orbit partition must not depend on it.
    u64 state = shuffle_seed;
    for (size_t i = gens.size(); i > 1; --i) {
      state = state * 6364136223846793005ULL + 1442695040888963407ULL;
      std::swap(gens[i - 1], gens[state % i]);
    }
  }
}

void TupleSpace::decode(u64 idx, u32* digits) const {
  for (int i = npos; i-- > 0;) {
    digits[i] = static_cast<u32>(idx % gsize);
    idx /= gsize;
  }
}

u64 TupleSpace::encode(const u32* digits) const {
  u64 idx = 0;
  for (int i = 0; i < npos; ++i) idx = idx * gsize + digits[i];
  return idx;
}

GeneratingVector TupleSpace::unpack(u64 idx) const {
  std::vector<u32> digits(npos);
  decode(idx, digits.data());
  std::vector<AbElement> a, b, c;
  for (int i = 0; i < rho; ++i) a.push_back(group.decode(digits[i]));
  for (int i = 0; i < rho; ++i) b.push_back(group.decode(digits[rho + i]));
  for (int j = 0; j < r; ++j) c.push_back(group.decode(digits[2 * rho + j]));
  return GeneratingVector{group, sig, std::move(a), std::move(b), std::move(c)};
}

u64 TupleSpace::pack(const GeneratingVector& gv) const {
  std::vector<u32> digits(npos);
  for (int i = 0; i < rho; ++i) digits[i] = static_cast<u32>(group.encode(gv.a[i]));
  for (int i = 0; i < rho; ++i) digits[rho + i] = static_cast<u32>(group.encode(gv.b[i]));
  for (int j = 0; j < r; ++j) digits[2 * rho + j] = static_cast<u32>(group.encode(gv.c[j]));
  return encode(digits.data());
}

void TupleSpace::apply_gen(const TupleGen& g, u32* d) const {
  if (g.kind == TupleGen::Kind::Aut) {
    const auto& perm = aut_perm[g.aut_index];
    for (int i = 0; i < npos; ++i) d[i] = perm[d[i]];
    return;
  }
  if (g.kind == TupleGen::Kind::CSwap) {
    std::swap(d[2 * rho + g.j1], d[2 * rho + g.j2]);
    return;
  }
  const Move& m = g.move;
  const int bi = rho + m.i;
  switch (m.kind) {
    case MoveKind::HandleA:
      d[bi] = add[static_cast<u64>(d[bi]) * gsize + d[m.i]];
      break;
    case MoveKind::HandleB:
      d[m.i] = add[static_cast<u64>(d[m.i]) * gsize + d[bi]];
      break;
    case MoveKind::HandleZ:
      d[m.i] = add[static_cast<u64>(d[m.i]) * gsize + d[m.i + 1]];
      d[bi + 1] = add[static_cast<u64>(d[bi + 1]) * gsize + neg[d[bi]]];
      break;
    case MoveKind::HandleR: {
      u32 ai = d[m.i];
      d[m.i] = d[bi];
      d[bi] = neg[ai];
      break;
    }
    case MoveKind::HandleS:
      std::swap(d[m.i], d[m.i + 1]);
      std::swap(d[bi], d[bi + 1]);
      break;
    case MoveKind::EllipticT:
      std::swap(d[2 * rho + m.j], d[2 * rho + m.j + 1]);
      break;
    case MoveKind::MixedU:
      d[bi] = add[static_cast<u64>(d[bi]) * gsize + d[2 * rho + m.j]];
      break;
    case MoveKind::MixedV:
      d[m.i] = add[static_cast<u64>(d[m.i]) * gsize + d[2 * rho + m.j]];
      break;
  }
}

bool TupleSpace::tuple_valid(const u32* d) const {
  for (int j = 0; j < r; ++j)
    if (order_of[d[2 * rho + j]] != sig.periods[j]) return false;
  if (r > 0) {
    u32 sum = d[2 * rho];
    for (int j = 1; j < r; ++j) sum = add[static_cast<u64>(sum) * gsize + d[2 * rho + j]];
    if (sum != 0) return false;  // index 0 encodes the zero element
  }
  // Surjectivity: span G/qG for every prime q | exp(G).  Incremental row
  // reduction with one stored basis row per lead position; rows normalized
  // to leading coefficient 1.
  constexpr int kMaxDim = 8;
  i64 basis[kMaxDim][kMaxDim];
  bool has_lead[kMaxDim];
  i64 v[kMaxDim];
  for (const auto& pv : primes) {
    const int dim = pv.dim;
    if (dim == 0) continue;
    for (int i = 0; i < dim; ++i) has_lead[i] = false;
    int rank = 0;
    for (int pos = 0; pos < npos && rank < dim; ++pos) {
      const i64* src = &pv.flat[static_cast<u64>(d[pos]) * dim];
      for (int i = 0; i < dim; ++i) v[i] = src[i];
      for (int l = 0; l < dim; ++l) {
        if (v[l] == 0) continue;
        if (has_lead[l]) {
          i64 f = v[l];
          for (int i = l; i < dim; ++i) {
            v[i] -= f * basis[l][i] % pv.q;
            v[i] %= pv.q;
            if (v[i] < 0) v[i] += pv.q;
          }
        } else {
          i64 inv = pv.inv[v[l]];
          for (int i = l; i < dim; ++i) basis[l][i] = v[i] * inv % pv.q;
          has_lead[l] = true;
          ++rank;
          break;
        }
      }
    }
    if (rank < dim) return false;
  }
  return true;
}

namespace {

class VisitedBits {
public:
  explicit VisitedBits(u64 n) : bits_((n + 63) / 64, 0) {}
  bool test(u64 i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
  void set(u64 i) { bits_[i >> 6] |= (1ULL << (i & 63)); }

private:
  std::vector<u64> bits_;
};

}  // namespace

OrbitScanResult scan_orbits(const TupleSpace& ts) {
  OrbitScanResult out;
  VisitedBits visited(ts.space);
  std::vector<u32> odo(ts.npos, 0), digits(ts.npos), tmp(ts.npos);
  std::vector<u32> frontier;  // fits: the oracle ceiling keeps space < 2^32
  for (u64 idx = 0; idx < ts.space; ++idx) {
    if (idx != 0) {
      int pos = ts.npos - 1;
      while (odo[pos] + 1 == ts.gsize) odo[pos--] = 0;
      ++odo[pos];
    }
    if (visited.test(idx)) {
      ++out.valid_tuples;  // visited implies valid
      continue;
    }
    if (!ts.tuple_valid(odo.data())) continue;
    ++out.valid_tuples;
    // BFS this orbit; idx is its minimum since any smaller member would
    // have been a seed earlier and marked idx visited.
    out.seeds.push_back(idx);
    ++out.orbit_count;
    visited.set(idx);
    frontier.clear();
    frontier.push_back(static_cast<u32>(idx));
    size_t head = 0;
    while (head < frontier.size()) {
      u64 cur = frontier[head++];
      ts.decode(cur, digits.data());
      for (const auto& gen : ts.gens) {
        tmp = digits;
        ts.apply_gen(gen, tmp.data());
        u64 nxt = ts.encode(tmp.data());
        if (!visited.test(nxt)) {
          visited.set(nxt);
          frontier.push_back(static_cast<u32>(nxt));
        }
      }
    }
  }
  return out;
}

OrbitWalk walk_orbit(const TupleSpace& ts, u64 start) {
  OrbitWalk walk;
  std::vector<std::int32_t> pos(ts.space, -1);
  std::vector<u32> digits(ts.npos), tmp(ts.npos);
  walk.members.push_back(start);
  walk.parent.push_back({0, -1});
  pos[start] = 0;
  size_t head = 0;
  while (head < walk.members.size()) {
    u64 cur = walk.members[head];
    ts.decode(cur, digits.data());
    for (size_t gi = 0; gi < ts.gens.size(); ++gi) {
      tmp = digits;
      ts.apply_gen(ts.gens[gi], tmp.data());
      u64 nxt = ts.encode(tmp.data());
      if (pos[nxt] < 0) {
        pos[nxt] = static_cast<std::int32_t>(walk.members.size());
        walk.members.push_back(nxt);
        walk.parent.push_back({static_cast<int>(head), static_cast<int>(gi)});
      }
    }
    ++head;
  }
  return walk;
}

}  // namespace detail

OrbitClasses orbit_classes_oracle(const AbelianGroup& g, const Signature& sig,
                                  const OracleOptions& opts) {
  detail::TupleSpace ts(g, sig, opts.ceilings, opts.shuffle_seed);
  auto scan = detail::scan_orbits(ts);
  OrbitClasses out;
  out.count = scan.orbit_count;
  out.valid_tuples = scan.valid_tuples;
  for (auto s : scan.seeds) out.representatives.push_back(ts.unpack(s));
  return out;
}

}  // namespace mcg
