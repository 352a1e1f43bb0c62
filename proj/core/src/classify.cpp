#include "mcg/classify.hpp"

#include <algorithm>
#include <future>
#include <numeric>
#include <stdexcept>

namespace mcg {

namespace {

FpMatrix columns_matrix(const std::vector<AbElement>& cols, int w, i64 p) {
  FpMatrix m(w, static_cast<int>(cols.size()), p);
  for (size_t j = 0; j < cols.size(); ++j)
    for (int i = 0; i < w; ++i) m.set(i, static_cast<int>(j), cols[j].c[i]);
  return m;
}

}  // namespace

SplitForm split(const GeneratingVector& gv) {
  i64 p = 0;
  if (!gv.group.is_elementary(&p))
    throw std::invalid_argument("split: group must be elementary abelian");
  const int w = gv.group.rank();
  const int rho = static_cast<int>(gv.sig.orbit_genus);
  const int r = gv.sig.branch_count();
  if (r == 1) throw OutOfScope("split: a single branch point is infeasible");
  for (i64 m : gv.sig.periods)
    if (m != p) throw std::invalid_argument("split: periods must all equal p");
  if (!validate(gv).ok()) throw std::invalid_argument("split: input is not a generating vector");

  GeneratingVector cur = gv;
  std::vector<ReductionStep> word;

  // Elliptic span and a complement spanned by standard vectors.
  FpMatrix xc = columns_matrix(cur.c, w, p);
  std::vector<int> cpivots;
  if (r > 0) xc.rref(&cpivots);
  const int v = static_cast<int>(cpivots.size());
  const int u = w - v;
  std::vector<std::vector<i64>> basis_cols;
  for (int k : cpivots) {
    std::vector<i64> col(w);
    for (int i = 0; i < w; ++i) col[i] = xc.at(i, k);
    basis_cols.push_back(std::move(col));
  }
  // Greedily extend by standard vectors to a full basis; those vectors span
  // the hyperbolic complement H_0.
  std::vector<std::vector<i64>> hcols;
  for (int e = 0; e < w && static_cast<int>(hcols.size()) < u; ++e) {
    FpMatrix test(w, static_cast<int>(basis_cols.size() + hcols.size()) + 1, p);
    int col = 0;
    for (const auto& bc : basis_cols) {
      for (int i = 0; i < w; ++i) test.set(i, col, bc[i]);
      ++col;
    }
    for (const auto& hc : hcols) {
      for (int i = 0; i < w; ++i) test.set(i, col, hc[i]);
      ++col;
    }
    test.set(e, col, 1);
    if (test.rank() == col + 1) {
      std::vector<i64> he(w, 0);
      he[e] = 1;
      hcols.push_back(std::move(he));
    }
  }

  // B maps coordinates to the split basis: columns are H_0 vectors then the
  // elliptic basis.  N = B^{-1} sends H_0 to the first u coordinates.
  FpMatrix bmat(w, w, p);
  for (int k = 0; k < u; ++k)
    for (int i = 0; i < w; ++i) bmat.set(i, k, hcols[k][i]);
  for (int k = 0; k < v; ++k)
    for (int i = 0; i < w; ++i) bmat.set(i, u + k, basis_cols[k][i]);
  auto binv = bmat.inverse();
  if (!binv) throw std::logic_error("split: basis completion failed");

  // Strip the elliptic component of every handle image with mixed moves.
  auto strip = [&](int handle, bool is_a) {
    const AbElement& y = is_a ? cur.a[handle] : cur.b[handle];
    // Coordinates of y in the split basis; the elliptic part is the tail.
    std::vector<i64> mu(w, 0);
    for (int i = 0; i < w; ++i) {
      i64 acc = 0;
      for (int k = 0; k < w; ++k) acc += binv->at(i, k) * y.c[k];
      mu[i] = ((acc % p) + p) % p;
    }
    std::vector<i64> epart(w, 0);
    for (int k = 0; k < v; ++k)
      for (int i = 0; i < w; ++i) epart[i] = (epart[i] + mu[u + k] * basis_cols[k][i]) % p;
    // Solve X_C lambda = epart and subtract with U/V moves.
    FpMatrix aug(w, r + 1, p);
    for (int i = 0; i < w; ++i) {
      for (int j = 0; j < r; ++j) aug.set(i, j, cur.c[j].c[i]);
      aug.set(i, r, epart[i]);
    }
    std::vector<int> pivots;
    FpMatrix red = aug.rref(&pivots);
    std::vector<i64> lambda(r, 0);
    for (size_t row = 0; row < pivots.size(); ++row) {
      if (pivots[row] == r) throw std::logic_error("split: elliptic part not in the span");
      lambda[pivots[row]] = red.at(static_cast<int>(row), r);
    }
    for (int j = 0; j < r; ++j) {
      if (lambda[j] == 0) continue;
      Move m{is_a ? MoveKind::MixedV : MoveKind::MixedU, handle, j, -lambda[j]};
      cur = apply_move(cur, m);
      word.push_back(ReductionStep{m});
    }
  };
  for (int i = 0; i < rho; ++i) {
    strip(i, true);
    strip(i, false);
  }

  // Basis change.
  std::vector<std::vector<i64>> nrows(w, std::vector<i64>(w, 0));
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < w; ++j) nrows[i][j] = binv->at(i, j);
  auto theta = AbAutomorphism::create(gv.group, nrows);
  if (!theta) throw std::logic_error("split: basis change is not invertible");
  cur = apply_reduction_word(cur, {ReductionStep{*theta}});
  word.push_back(ReductionStep{*theta});

  // Certify: replay, then read off the blocks.
  GeneratingVector replay = apply_reduction_word(gv, word);
  if (!(replay == cur)) throw std::logic_error("split: word replay mismatch");

  SplitForm out;
  out.u = u;
  out.v = v;
  out.word = std::move(word);
  out.y_ab = FpMatrix(u, 2 * rho, p);
  for (int i = 0; i < rho; ++i)
    for (int k = 0; k < u; ++k) {
      out.y_ab.set(k, i, cur.a[i].c[k]);
      out.y_ab.set(k, rho + i, cur.b[i].c[k]);
    }
  out.y_c = FpMatrix(v, r, p);
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < v; ++k) out.y_c.set(k, j, cur.c[j].c[u + k]);
  // Zero blocks and certified ranks.
  for (int i = 0; i < rho; ++i)
    for (int k = u; k < w; ++k)
      if (cur.a[i].c[k] != 0 || cur.b[i].c[k] != 0)
        throw std::logic_error("split: handle images kept an elliptic component");
  for (int j = 0; j < r; ++j)
    for (int k = 0; k < u; ++k)
      if (cur.c[j].c[k] != 0) throw std::logic_error("split: elliptic images left the elliptic block");
  if (out.y_ab.rank() != u || out.y_c.rank() != v)
    throw std::logic_error("split: block ranks are not (u, v)");
  return out;
}

namespace {

i64 ramified_class_count(i64 p, int v, int r, const Ceilings& ceilings, std::string* provenance) {
  try {
    i64 value = table51(r, v, p);
    *provenance = "table51";
    return value;
  } catch (const OutOfScope&) {
    i64 value = orbit_count_oracle(v, r, p, ceilings);
    *provenance = "oracle";
    return value;
  }
}

}  // namespace

ActionCount count_actions(i64 p, int w, const Signature& sig, const Ceilings& ceilings) {
  if (!is_prime(p)) throw std::invalid_argument("count_actions: p must be prime");
  if (w < 1) throw std::invalid_argument("count_actions: rank must be >= 1");
  for (i64 m : sig.periods)
    if (m != p) throw std::invalid_argument("count_actions: signature must be (rho; p, ..., p)");
  ActionCount out;
  i64 group_order = 1;
  for (int i = 0; i < w; ++i) group_order *= p;
  out.genus = genus_from_signature(group_order, sig);
  const int r = sig.branch_count();
  const i64 rho = sig.orbit_genus;
  if (!out.genus) {
    out.feasible = false;
    out.note = "signature fails the Riemann-Hurwitz integrality condition";
    return out;
  }
  if (r == 1) {
    out.feasible = false;
    out.note = "a single branch point admits no generating vector";
    return out;
  }
  for (int u = 0; u <= w; ++u) {
    const int v = w - u;
    i64 h = u <= 2 * rho ? count_elementary(rho, u) : 0;
    if (h == 0) continue;
    i64 e = 0;
    std::string provenance = "trivial";
    if (v == 0) {
      e = r == 0 ? 1 : 0;
    } else if (r > 0 && v < r) {
      e = ramified_class_count(p, v, r, ceilings, &provenance);
    }
    if (e == 0) continue;
    out.total += h * e;
    out.summands.push_back({u, v, h, e, provenance});
  }
  return out;
}

CensusReport genus_census(i64 p, int w, i64 genus, const Ceilings& ceilings, int workers) {
  if (genus < 2) throw std::invalid_argument("genus_census: genus must be >= 2");
  CensusReport rep;
  rep.p = p;
  rep.w = w;
  rep.genus = genus;
  i64 pw = 1;
  for (int i = 0; i < w; ++i) pw *= p;
  const i64 ram = pw / p * (p - 1);  // p^{w-1}(p-1), the per-branch-point term
  std::vector<Signature> sigs;
  for (i64 r = 0;; ++r) {
    i64 rhs = 2 * genus - 2 - r * ram;
    if (rhs < -2 * pw) break;
    if (r == 1) continue;
    // 2*genus - 2 = pw*(2*rho - 2) + r*ram
    if (((rhs % pw) + pw) % pw != 0) continue;
    i64 two_rho = rhs / pw + 2;
    if (two_rho < 0 || two_rho % 2 != 0) continue;
    Signature sig{two_rho / 2, std::vector<i64>(static_cast<size_t>(r), p)};
    sigs.push_back(std::move(sig));
  }
  std::vector<ActionCount> counts(sigs.size());
  if (workers > 1 && sigs.size() > 1) {
    std::vector<std::future<ActionCount>> futs;
    for (const auto& sig : sigs)
      futs.push_back(std::async(std::launch::async,
                                [&, sig]() { return count_actions(p, w, sig, ceilings); }));
    for (size_t i = 0; i < futs.size(); ++i) counts[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < sigs.size(); ++i) counts[i] = count_actions(p, w, sigs[i], ceilings);
  }
  for (size_t i = 0; i < sigs.size(); ++i) {
    rep.total += counts[i].total;
    rep.entries.push_back({std::move(sigs[i]), std::move(counts[i])});
  }
  return rep;
}

}  // namespace mcg
