#include "mcg/unramified.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tuple_space.hpp"

namespace mcg {

i64 count_elementary(i64 rho, i64 r) {
  if (rho < 0 || r < 0) throw std::invalid_argument("count_elementary: negative argument");
  i64 lo = (r + 1) / 2;  // ceil(r/2)
  i64 hi = std::min(rho, r);
  return std::max<i64>(0, hi - lo + 1);
}

std::vector<CanonicalUnramified> canonical_reps_elementary(i64 p, int w, i64 rho) {
  if (!is_prime(p)) throw std::invalid_argument("canonical_reps_elementary: p must be prime");
  if (w < 1) throw std::invalid_argument("canonical_reps_elementary: rank must be >= 1");
  std::vector<CanonicalUnramified> out;
  if (w > 2 * rho) return out;
  AbelianGroup g(std::vector<i64>(w, p));
  Signature sig{rho, {}};
  for (i64 k = (w + 1) / 2; k <= std::min<i64>(rho, w); ++k) {
    std::vector<AbElement> a(rho, g.zero()), b(rho, g.zero()), c;
    for (i64 i = 0; i < k; ++i) a[i] = g.generator(static_cast<int>(i));
    for (i64 i = 0; i < w - k; ++i) b[i] = g.generator(static_cast<int>(i + k));
    out.push_back({k, make_generating_vector(g, sig, a, b, c)});
  }
  return out;
}

namespace {

// gcd with the convention gcd(0, n) = n, as a subgroup index: <N w_j> is
// the subgroup of order n_j / gcd(N, n_j).
i64 coeff_gcd(i64 n, i64 v) { return std::gcd(v, n); }

bool subgroup_leq(i64 n, i64 a, i64 b) {
  // <a w> <= <b w>  iff  gcd(b,n) | gcd(a,n)
  return coeff_gcd(n, a) % coeff_gcd(n, b) == 0;
}

struct CoeffSlot {
  int i, j;               // B_i coefficient at w_j
  std::vector<i64> vals;  // admissible residues
};

struct NormalFormShape {
  // A_i images are fixed; the B grid carries free coefficients plus fixed
  // leading entries (t > rho case).
  std::vector<std::vector<i64>> fixed_b;  // rho x t, leading terms only
  std::vector<CoeffSlot> slots;
  i64 rho = 0;
  int t = 0;
  int lead_rows = 0;  // first row index with a fixed leading term, or rho
};

NormalFormShape normal_form_shape(const AbelianGroup& g, i64 rho) {
  NormalFormShape shape;
  const int t = g.rank();
  shape.t = t;
  shape.rho = rho;
  shape.fixed_b.assign(static_cast<size_t>(rho), std::vector<i64>(t, 0));
  if (t <= rho) {
    shape.lead_rows = static_cast<int>(rho);
    for (int i = 0; i + 1 < t; ++i)
      for (int j = i + 1; j < t; ++j) {
        CoeffSlot slot{i, j, {}};
        i64 nj = g.factor(j);
        if (j == i + 1) {
          for (i64 v = 0; v < nj; ++v)
            if (v == 1 || std::gcd(nj, v) > 1) slot.vals.push_back(v);
        } else {
          for (i64 v = 0; v < nj; ++v) slot.vals.push_back(v);
        }
        shape.slots.push_back(std::move(slot));
      }
  } else {
    const int split = static_cast<int>(2 * rho) - t;  // rows below have leads
    shape.lead_rows = split;
    for (int i = 0; i < split; ++i)
      for (int j = i + 1; j < t; ++j) {
        CoeffSlot slot{i, j, {}};
        i64 nj = g.factor(j);
        if (j == i + 1 && i <= split - 2) {
          // Adjacent coefficient of a fully free row.
          for (i64 v = 0; v < nj; ++v)
            if (v == 1 || std::gcd(nj, v) > 1) slot.vals.push_back(v);
        } else {
          for (i64 v = 0; v < nj; ++v) slot.vals.push_back(v);
        }
        shape.slots.push_back(std::move(slot));
      }
    const i64 n_last = g.factor(t - 1);
    for (int i = split; i < rho; ++i) {
      int lead = static_cast<int>(2 * rho) - i - 1;
      shape.fixed_b[i][lead] = 1;
      for (int j = i + 1; j <= static_cast<int>(2 * rho) - i - 2; ++j) {
        CoeffSlot slot{i, j, {}};
        i64 nj = g.factor(j);
        for (i64 v = 0; v < nj; ++v) {
          if (v == 0) {
            slot.vals.push_back(v);
            continue;
          }
          i64 ord = nj / std::gcd(nj, v);
          if (n_last % ord != 0) slot.vals.push_back(v);  // order does not divide n_t
        }
        shape.slots.push_back(std::move(slot));
      }
    }
  }
  return shape;
}

bool chain_conditions_hold(const AbelianGroup& g, const NormalFormShape& shape,
                           const std::vector<std::vector<i64>>& bgrid) {
  // For each comparable row pair: if j > i+1 is the largest index with a
  // nonzero coefficient in row i then <N_{i,j} w_j> <= <N_{i+1,j} w_j>.
  const int t = shape.t;
  // Row i must be a coefficient row; the compared row i+1 may carry a lead.
  for (int i = 0; i < shape.lead_rows && i + 1 < static_cast<int>(shape.rho); ++i) {
    int jmax = -1;
    for (int j = 0; j < t; ++j)
      if (bgrid[i][j] != 0) jmax = j;
    if (jmax <= i + 1) continue;
    if (!subgroup_leq(g.factor(jmax), bgrid[i][jmax], bgrid[i + 1][jmax])) return false;
  }
  return true;
}

GeneratingVector build_candidate(const AbelianGroup& g, i64 rho,
                                 const std::vector<std::vector<i64>>& bgrid) {
  const int t = g.rank();
  Signature sig{rho, {}};
  std::vector<AbElement> a(static_cast<size_t>(rho), g.zero());
  std::vector<AbElement> b(static_cast<size_t>(rho), g.zero());
  for (int i = 0; i < std::min<i64>(rho, t); ++i) a[i] = g.generator(i);
  for (i64 i = 0; i < rho; ++i) {
    std::vector<i64> coords(t, 0);
    for (int j = 0; j < t; ++j) coords[j] = bgrid[i][j];
    b[i] = g.reduce(std::move(coords));
  }
  return make_generating_vector(g, sig, std::move(a), std::move(b), {});
}

}  // namespace

std::vector<GeneratingVector> normal_form_candidates(const AbelianGroup& g, i64 rho) {
  const int t = g.rank();
  std::vector<GeneratingVector> out;
  if (t == 0) {
    out.push_back(make_generating_vector(
        g, Signature{rho, {}}, std::vector<AbElement>(static_cast<size_t>(rho), g.zero()),
        std::vector<AbElement>(static_cast<size_t>(rho), g.zero()), {}));
    return out;
  }
  if (t > 2 * rho) return out;
  i64 p = 0;
  if (g.is_elementary(&p)) {
    for (auto& rep : canonical_reps_elementary(p, t, rho)) out.push_back(std::move(rep.vec));
    return out;
  }
  NormalFormShape shape = normal_form_shape(g, rho);
  __int128 combos = 1;
  for (const auto& slot : shape.slots) {
    combos *= static_cast<i64>(slot.vals.size());
    if (combos > (1 << 22)) throw CeilingExceeded("normal_form_candidates: coefficient grid too large");
  }
  std::vector<size_t> pick(shape.slots.size(), 0);
  while (true) {
    auto bgrid = shape.fixed_b;
    for (size_t s = 0; s < shape.slots.size(); ++s)
      bgrid[shape.slots[s].i][shape.slots[s].j] = shape.slots[s].vals[pick[s]];
    if (chain_conditions_hold(g, shape, bgrid)) out.push_back(build_candidate(g, rho, bgrid));
    size_t pos = pick.size();
    while (pos > 0 && pick[pos - 1] + 1 == shape.slots[pos - 1].vals.size()) pick[--pos] = 0;
    if (pos == 0) break;
    ++pick[pos - 1];
  }
  return out;
}

namespace {

bool is_k_form(const GeneratingVector& gv) {
  const auto& g = gv.group;
  const int t = g.rank();
  const i64 rho = gv.sig.orbit_genus;
  for (i64 k = (t + 1) / 2; k <= std::min<i64>(rho, t); ++k) {
    bool ok = true;
    for (i64 i = 0; i < rho && ok; ++i) {
      AbElement wa = i < k ? g.generator(static_cast<int>(i)) : g.zero();
      AbElement wb = i < t - k ? g.generator(static_cast<int>(i + k)) : g.zero();
      if (!(gv.a[i] == wa) || !(gv.b[i] == wb)) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

bool matches_shape(const GeneratingVector& gv) {
  const auto& g = gv.group;
  const int t = g.rank();
  const i64 rho = gv.sig.orbit_genus;
  if (t > 2 * rho) return false;
  NormalFormShape shape = normal_form_shape(g, rho);
  for (i64 i = 0; i < rho; ++i) {
    AbElement wa = i < t ? g.generator(static_cast<int>(i)) : g.zero();
    if (t > rho && i >= std::min<i64>(rho, t)) wa = g.zero();
    if (!(gv.a[i] == wa)) return false;
  }
  std::vector<std::vector<i64>> bgrid(static_cast<size_t>(rho), std::vector<i64>(t, 0));
  for (i64 i = 0; i < rho; ++i)
    for (int j = 0; j < t; ++j) bgrid[i][j] = gv.b[i].c[j];
  // Fixed leading structure plus slot membership.
  auto allowed = shape.fixed_b;
  std::vector<std::vector<bool>> is_slot(static_cast<size_t>(rho), std::vector<bool>(t, false));
  for (const auto& slot : shape.slots) is_slot[slot.i][slot.j] = true;
  for (i64 i = 0; i < rho; ++i)
    for (int j = 0; j < t; ++j) {
      if (is_slot[i][j]) {
        const CoeffSlot* slot = nullptr;
        for (const auto& s : shape.slots)
          if (s.i == i && s.j == j) slot = &s;
        if (std::find(slot->vals.begin(), slot->vals.end(), bgrid[i][j]) == slot->vals.end())
          return false;
      } else if (bgrid[i][j] != allowed[i][j]) {
        return false;
      }
    }
  return chain_conditions_hold(gv.group, shape, bgrid);
}

}  // namespace

bool is_normal_form(const GeneratingVector& gv) {
  if (gv.sig.branch_count() != 0) return false;
  const int t = gv.group.rank();
  if (t == 0) return true;
  if (t > 2 * gv.sig.orbit_genus) return false;
  if (gv.group.is_elementary(nullptr)) return is_k_form(gv);
  return matches_shape(gv);
}

GeneratingVector apply_reduction_word(const GeneratingVector& gv,
                                      const std::vector<ReductionStep>& word) {
  GeneratingVector cur = gv;
  for (const auto& step : word) {
    if (std::holds_alternative<Move>(step)) {
      cur = apply_move(cur, std::get<Move>(step));
    } else {
      const auto& theta = std::get<AbAutomorphism>(step);
      for (auto& e : cur.a) e = theta.apply(e);
      for (auto& e : cur.b) e = theta.apply(e);
      for (auto& e : cur.c) e = theta.apply(e);
    }
  }
  return cur;
}

namespace {

ReductionResult reduce_cyclic(const GeneratingVector& gv) {
  const auto& g = gv.group;
  const i64 n = g.factor(0);
  const i64 rho = gv.sig.orbit_genus;
  GeneratingVector cur = gv;
  std::vector<ReductionStep> word;
  auto play = [&](Move m) {
    cur = apply_move(cur, m);
    word.push_back(m);
  };
  // Stage 1: within each handle pair, contract (A_i, B_i) to (d, 0).
  for (int i = 0; i < rho; ++i) {
    while (true) {
      i64 a = cur.a[i].c[0], b = cur.b[i].c[0];
      if (b == 0) break;
      if (a == 0) {
        play(Move{MoveKind::HandleR, i, 0, 1});  // (0,b) -> (b,0)
        continue;
      }
      if (a >= b) {
        play(Move{MoveKind::HandleB, i, 0, -(a / b)});
      } else {
        play(Move{MoveKind::HandleA, i, 0, -(b / a)});
      }
    }
  }
  // Stage 2: fold A_{i+1} into A_i, right to left.
  for (int i = static_cast<int>(rho) - 2; i >= 0; --i) {
    while (true) {
      i64 a = cur.a[i].c[0], b = cur.a[i + 1].c[0];
      if (b == 0) break;
      if (a == 0 || a < b) {
        play(Move{MoveKind::HandleS, i, 0, 1});
        continue;
      }
      play(Move{MoveKind::HandleZ, i, 0, -(a / b)});
    }
  }
  // Stage 3: rescale the surviving generator to w_1.
  i64 d = cur.a[0].c[0];
  if (std::gcd(d, n) != 1)
    throw std::logic_error("reduce_abelian: cyclic input was not surjective");
  if (d != 1) {
    i64 u = 1, x = d % n;  // u = d^{-1} via order scan (n is small)
    while (x != 1) {
      x = x * d % n;
      u = u * d % n;
    }
    std::vector<std::vector<i64>> m{{u}};
    auto theta = AbAutomorphism::create(g, m);
    if (!theta) throw std::logic_error("reduce_abelian: unit scaling failed");
    cur = apply_reduction_word(cur, {ReductionStep{*theta}});
    word.push_back(ReductionStep{*theta});
  }
  return {cur, std::move(word)};
}

}  // namespace

ReductionResult reduce_abelian(const GeneratingVector& gv, const Ceilings& ceilings) {
  if (gv.sig.branch_count() != 0)
    throw std::invalid_argument("reduce_abelian: the vector must be unramified");
  if (!validate(gv).ok()) throw std::invalid_argument("reduce_abelian: input is not a generating vector");
  ReductionResult result{gv, {}};
  if (is_normal_form(gv)) return result;
  if (gv.group.rank() == 1) {
    result = reduce_cyclic(gv);
  } else {
    detail::TupleSpace ts(gv.group, gv.sig, ceilings, 0);
    auto walk = detail::walk_orbit(ts, ts.pack(gv));
    int best = -1;
    detail::u64 best_idx = 0;
    for (size_t i = 0; i < walk.members.size(); ++i) {
      if (best >= 0 && walk.members[i] >= best_idx) continue;
      GeneratingVector cand = ts.unpack(walk.members[i]);
      if (is_normal_form(cand)) {
        best = static_cast<int>(i);
        best_idx = walk.members[i];
      }
    }
    if (best < 0) throw std::logic_error("reduce_abelian: orbit contains no normal form");
    std::vector<int> genpath;
    for (int at = best; walk.parent[at].second >= 0; at = walk.parent[at].first)
      genpath.push_back(walk.parent[at].second);
    std::reverse(genpath.begin(), genpath.end());
    for (int gi : genpath) {
      const auto& tg = ts.gens[gi];
      if (tg.kind == detail::TupleGen::Kind::Move)
        result.word.push_back(ReductionStep{tg.move});
      else if (tg.kind == detail::TupleGen::Kind::Aut)
        result.word.push_back(ReductionStep{ts.aut_gens[tg.aut_index]});
      else
        throw std::logic_error("reduce_abelian: unexpected branch-point generator");
    }
    result.reduced = ts.unpack(walk.members[best]);
  }
  // Certify by replay.
  GeneratingVector replay = apply_reduction_word(gv, result.word);
  if (!(replay == result.reduced))
    throw std::logic_error("reduce_abelian: word replay does not reproduce the result");
  return result;
}

i64 count_rank2_squarefree(i64 n2) {
  if (n2 < 1) throw std::invalid_argument("count_rank2_squarefree: n2 must be positive");
  i64 count = 1, n = n2;
  for (i64 q = 2; q * q <= n2; ++q) {
    if (n % q != 0) continue;
    n /= q;
    if (n % q == 0) throw OutOfScope("count_rank2_squarefree: n2 is not squarefree");
    count *= 2;
  }
  if (n > 1) count *= 2;
  return count;  // number of divisors of a squarefree integer
}

i64 count_rank_r_n2_prime(i64 rho, i64 r) { return count_elementary(rho, r); }

UnramifiedClassification classify_unramified(const AbelianGroup& g, i64 rho,
                                             const Ceilings& ceilings) {
  UnramifiedClassification out;
  const int t = g.rank();
  if (t > 2 * rho) {
    out.class_count = 0;
    out.method = "infeasible-rank";
    return out;
  }
  auto candidates = normal_form_candidates(g, rho);
  out.candidate_count = static_cast<i64>(candidates.size());
  i64 p = 0;
  if (t == 0 || g.is_elementary(&p)) {
    out.class_count = t == 0 ? 1 : count_elementary(rho, t);
    out.representatives = std::move(candidates);
    out.method = "elementary";
    return out;
  }
  bool separated = true;
  for (size_t i = 0; i < candidates.size() && separated; ++i)
    for (size_t j = i + 1; j < candidates.size() && separated; ++j)
      if (cup_equivalent_mod_aut(candidates[i], candidates[j], ceilings)) separated = false;
  if (separated) {
    out.class_count = static_cast<i64>(candidates.size());
    out.representatives = std::move(candidates);
    out.method = "cup-separation";
    return out;
  }
  try {
    OracleOptions opts;
    opts.ceilings = ceilings;
    auto oracle = orbit_classes_oracle(g, Signature{rho, {}}, opts);
    out.class_count = oracle.count;
    out.representatives = std::move(oracle.representatives);
    out.method = "oracle";
    return out;
  } catch (const CeilingExceeded&) {
    out.class_count = static_cast<i64>(candidates.size());
    out.exact = false;
    out.representatives = std::move(candidates);
    out.method = "candidates";
    return out;
  }
}

}  // namespace mcg
