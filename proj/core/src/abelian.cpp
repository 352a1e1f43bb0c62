#include "mcg/abelian.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace mcg {

namespace {
i64 lcm64(i64 a, i64 b) { return a / std::gcd(a, b) * b; }
}  // namespace

AbelianGroup::AbelianGroup(std::vector<i64> factors) : n_(std::move(factors)) {
  if (n_.empty()) return;  // trivial group is allowed as the empty product
  for (size_t i = 0; i < n_.size(); ++i) {
    if (n_[i] < 2) throw std::invalid_argument("invariant factors must be >= 2");
    if (i + 1 < n_.size() && n_[i] % n_[i + 1] != 0)
      throw std::invalid_argument("invariant factors must form a divisibility chain");
  }
}

i64 AbelianGroup::order() const {
  i64 o = 1;
  for (i64 n : n_) o *= n;
  return o;
}

bool AbelianGroup::is_elementary(i64* p) const {
  if (n_.empty()) return false;
  i64 q = n_.front();
  if (!is_prime(q)) return false;
  for (i64 n : n_)
    if (n != q) return false;
  if (p) *p = q;
  return true;
}

AbElement AbelianGroup::reduce(std::vector<i64> coords) const {
  if (coords.size() != n_.size())
    throw std::invalid_argument("element coordinate count does not match rank");
  for (size_t i = 0; i < coords.size(); ++i) {
    coords[i] %= n_[i];
    if (coords[i] < 0) coords[i] += n_[i];
  }
  return AbElement{std::move(coords)};
}

AbElement AbelianGroup::add(const AbElement& x, const AbElement& y) const {
  AbElement r = x;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = (r.c[i] + y.c[i]) % n_[i];
  return r;
}

AbElement AbelianGroup::sub(const AbElement& x, const AbElement& y) const {
  AbElement r = x;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = (r.c[i] - y.c[i] + n_[i]) % n_[i];
  return r;
}

AbElement AbelianGroup::neg(const AbElement& x) const {
  AbElement r = x;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = (n_[i] - r.c[i]) % n_[i];
  return r;
}

AbElement AbelianGroup::scale(i64 k, const AbElement& x) const {
  AbElement r = x;
  for (size_t i = 0; i < r.c.size(); ++i) {
    i64 kk = k % n_[i];
    if (kk < 0) kk += n_[i];
    r.c[i] = r.c[i] * kk % n_[i];
  }
  return r;
}

AbElement AbelianGroup::generator(int i) const {
  AbElement r = zero();
  r.c[i] = 1;
  return r;
}

i64 AbelianGroup::element_order(const AbElement& x) const {
  i64 o = 1;
  for (size_t i = 0; i < x.c.size(); ++i) {
    if (x.c[i] == 0) continue;
    o = lcm64(o, n_[i] / std::gcd(n_[i], x.c[i]));
  }
  return o;
}

bool AbelianGroup::is_zero(const AbElement& x) const {
  for (i64 v : x.c)
    if (v != 0) return false;
  return true;
}

std::uint64_t AbelianGroup::encode(const AbElement& x) const {
  std::uint64_t idx = 0;
  for (size_t i = 0; i < n_.size(); ++i)
    idx = idx * static_cast<std::uint64_t>(n_[i]) + static_cast<std::uint64_t>(x.c[i]);
  return idx;
}

AbElement AbelianGroup::decode(std::uint64_t idx) const {
  AbElement x = zero();
  for (size_t i = n_.size(); i-- > 0;) {
    x.c[i] = static_cast<i64>(idx % static_cast<std::uint64_t>(n_[i]));
    idx /= static_cast<std::uint64_t>(n_[i]);
  }
  return x;
}

std::optional<AbAutomorphism> AbAutomorphism::create(const AbelianGroup& g,
                                                     const std::vector<std::vector<i64>>& matrix,
                                                     i64 semantic_ceiling) {
  const int t = g.rank();
  if (static_cast<int>(matrix.size()) != t)
    throw std::invalid_argument("automorphism matrix has wrong shape");
  std::vector<i64> m(static_cast<size_t>(t) * t);
  for (int i = 0; i < t; ++i) {
    if (static_cast<int>(matrix[i].size()) != t)
      throw std::invalid_argument("automorphism matrix has wrong shape");
    for (int j = 0; j < t; ++j) {
      i64 v = matrix[i][j] % g.factor(i);
      if (v < 0) v += g.factor(i);
      m[static_cast<size_t>(i) * t + j] = v;
    }
  }
  AbAutomorphism cand(g, std::move(m));

  // Well-definedness: the image of generator j must have order dividing n_j.
  for (int j = 0; j < t; ++j) {
    AbElement img = cand.apply(g.generator(j));
    if (g.factor(j) % g.element_order(img) != 0) return std::nullopt;
  }

  // Bijectivity.  Equal invariant factors admit the determinant-unit
  // criterion; otherwise check injectivity on the full element set.
  bool equal_factors = true;
  for (int i = 1; i < t; ++i)
    if (g.factor(i) != g.factor(0)) equal_factors = false;
  if (t > 0 && equal_factors) {
    const i64 n = g.factor(0);
    // Integer determinant mod n via fraction-free expansion (t is small).
    std::function<i64(std::vector<i64>, int)> det = [&](std::vector<i64> a, int dim) -> i64 {
      if (dim == 1) return a[0] % n;
      i64 acc = 0;
      for (int r = 0; r < dim; ++r) {
        std::vector<i64> minor;
        minor.reserve(static_cast<size_t>(dim - 1) * (dim - 1));
        for (int i = 0; i < dim; ++i) {
          if (i == r) continue;
          for (int j = 1; j < dim; ++j) minor.push_back(a[static_cast<size_t>(i) * dim + j]);
        }
        i64 term = a[static_cast<size_t>(r) * dim] % n * det(minor, dim - 1) % n;
        acc = ((r % 2 == 0) ? acc + term : acc - term) % n;
      }
      return (acc % n + n) % n;
    };
    std::vector<i64> a(static_cast<size_t>(t) * t);
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) a[static_cast<size_t>(i) * t + j] = cand.entry(i, j);
    i64 d = det(a, t);
    if (std::gcd(d, n) != 1) return std::nullopt;
    return cand;
  }
  if (g.order() > semantic_ceiling)
    throw CeilingExceeded("automorphism validation: group too large for semantic check");
  std::vector<bool> hit(static_cast<size_t>(g.order()), false);
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(g.order()); ++idx) {
    std::uint64_t img = g.encode(cand.apply(g.decode(idx)));
    if (hit[img]) return std::nullopt;
    hit[img] = true;
  }
  return cand;
}

AbAutomorphism AbAutomorphism::identity(const AbelianGroup& g) {
  const int t = g.rank();
  std::vector<i64> m(static_cast<size_t>(t) * t, 0);
  for (int i = 0; i < t; ++i) m[static_cast<size_t>(i) * t + i] = 1;
  return AbAutomorphism(g, std::move(m));
}

AbElement AbAutomorphism::apply(const AbElement& x) const {
  const int t = g_.rank();
  AbElement r = g_.zero();
  for (int i = 0; i < t; ++i) {
    i64 acc = 0;
    for (int j = 0; j < t; ++j) acc += entry(i, j) % g_.factor(i) * (x.c[j] % g_.factor(i)) % g_.factor(i);
    r.c[i] = ((acc % g_.factor(i)) + g_.factor(i)) % g_.factor(i);
  }
  return r;
}

AbAutomorphism AbAutomorphism::then(const AbAutomorphism& o) const {
  const int t = g_.rank();
  std::vector<std::vector<i64>> m(t, std::vector<i64>(t, 0));
  // (o after *this): column j = o(this(w_j)).
  for (int j = 0; j < t; ++j) {
    AbElement img = o.apply(apply(g_.generator(j)));
    for (int i = 0; i < t; ++i) m[i][j] = img.c[i];
  }
  auto r = create(g_, m);
  if (!r) throw std::logic_error("composition of automorphisms failed validation");
  return *r;
}

std::optional<i64> genus_from_signature(i64 group_order, const Signature& sig) {
  if (group_order < 1) throw std::invalid_argument("group order must be positive");
  // 2*sigma - 2 = |G| * ((2*rho - 2 + r) - sum 1/m_j); work over a common
  // denominator D = lcm of the periods.
  i64 d = 1;
  for (i64 m : sig.periods) {
    if (m < 2) throw std::invalid_argument("periods must be >= 2");
    d = lcm64(d, m);
  }
  i64 scaled = (2 * sig.orbit_genus - 2 + sig.branch_count()) * d;
  for (i64 m : sig.periods) scaled -= d / m;
  // sigma = 1 + |G| * scaled / (2 d)
  i64 num = group_order * scaled;
  if (num % (2 * d) != 0) return std::nullopt;
  return 1 + num / (2 * d);
}

void for_each_automorphism(const AbelianGroup& g,
                           const std::function<void(const AbAutomorphism&)>& fn, i64 ceiling) {
  if (g.order() > ceiling)
    throw CeilingExceeded("enumerate_automorphisms: |G| exceeds ceiling");
  const int t = g.rank();
  if (t == 0) {
    fn(AbAutomorphism::identity(g));
    return;
  }
  // Candidate images for generator j: elements of order dividing n_j.
  std::vector<std::vector<AbElement>> candidates(t);
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(g.order()); ++idx) {
    AbElement x = g.decode(idx);
    i64 o = g.element_order(x);
    for (int j = 0; j < t; ++j)
      if (g.factor(j) % o == 0) candidates[j].push_back(x);
  }
  std::vector<size_t> pick(t, 0);
  std::vector<std::vector<i64>> m(t, std::vector<i64>(t, 0));
  while (true) {
    for (int j = 0; j < t; ++j)
      for (int i = 0; i < t; ++i) m[i][j] = candidates[j][pick[j]].c[i];
    if (auto a = AbAutomorphism::create(g, m, ceiling)) fn(*a);
    int pos = t - 1;
    while (pos >= 0 && pick[pos] + 1 == candidates[pos].size()) pick[pos--] = 0;
    if (pos < 0) break;
    ++pick[pos];
  }
}

std::vector<AbAutomorphism> enumerate_automorphisms(const AbelianGroup& g, i64 ceiling) {
  std::vector<AbAutomorphism> out;
  for_each_automorphism(g, [&](const AbAutomorphism& a) { out.push_back(a); }, ceiling);
  return out;
}

namespace {

i64 primitive_root(i64 p) {
  // p is a small prime; scan for a generator of F_p^* by direct order check.
  for (i64 g = 2; g < p; ++g) {
    i64 x = g % p;
    i64 ord = 1;
    while (x != 1) {
      x = x * g % p;
      ++ord;
    }
    if (ord == p - 1) return g;
  }
  return 1;
}

std::vector<i64> perm_on_elements(const AbelianGroup& g, const AbAutomorphism& a) {
  std::vector<i64> perm(static_cast<size_t>(g.order()));
  for (std::uint64_t idx = 0; idx < static_cast<std::uint64_t>(g.order()); ++idx)
    perm[idx] = static_cast<i64>(g.encode(a.apply(g.decode(idx))));
  return perm;
}

}  // namespace

std::vector<AbAutomorphism> automorphism_generators(const AbelianGroup& g, i64 ceiling) {
  const int t = g.rank();
  std::vector<AbAutomorphism> gens;
  if (t == 0) return gens;
  i64 p = 0;
  if (g.is_elementary(&p)) {
    // Transvections generate SL_t(F_p); one primitive scalar lifts to GL.
    for (int i = 0; i < t; ++i)
      for (int j = 0; j < t; ++j) {
        if (i == j) continue;
        std::vector<std::vector<i64>> m(t, std::vector<i64>(t, 0));
        for (int k = 0; k < t; ++k) m[k][k] = 1;
        m[i][j] = 1;
        gens.push_back(*AbAutomorphism::create(g, m));
      }
    std::vector<std::vector<i64>> m(t, std::vector<i64>(t, 0));
    for (int k = 0; k < t; ++k) m[k][k] = 1;
    m[0][0] = primitive_root(p);
    gens.push_back(*AbAutomorphism::create(g, m));
    return gens;
  }

  // Greedy: enumerate Aut(G) and keep adding the first element not yet in
  // the closure of the chosen generators.
  auto all = enumerate_automorphisms(g, ceiling);
  std::set<std::vector<i64>> closure_set;
  std::vector<std::vector<i64>> frontier;
  auto add_closure = [&](const std::vector<i64>& perm) {
    if (closure_set.insert(perm).second) frontier.push_back(perm);
  };
  std::vector<std::vector<i64>> gen_perms;
  std::vector<i64> id_perm(static_cast<size_t>(g.order()));
  for (size_t i = 0; i < id_perm.size(); ++i) id_perm[i] = static_cast<i64>(i);
  add_closure(id_perm);
  auto reclose = [&]() {
    while (!frontier.empty()) {
      std::vector<i64> cur = std::move(frontier.back());
      frontier.pop_back();
      for (const auto& gp : gen_perms) {
        std::vector<i64> comp(cur.size());
        for (size_t i = 0; i < cur.size(); ++i) comp[i] = gp[static_cast<size_t>(cur[i])];
        add_closure(comp);
      }
    }
  };
  for (const auto& a : all) {
    auto perm = perm_on_elements(g, a);
    if (closure_set.count(perm)) continue;
    gens.push_back(a);
    gen_perms.push_back(perm);
    frontier.assign(closure_set.begin(), closure_set.end());
    reclose();
    if (closure_set.size() == all.size()) break;
  }
  return gens;
}

i64 tensor_modulus(const AbelianGroup& g, int i, int j) {
  return std::gcd(g.factor(i), g.factor(j));
}

TensorSquareElement tensor_zero(const AbelianGroup& g) {
  TensorSquareElement t;
  t.t = g.rank();
  t.coords.assign(static_cast<size_t>(t.t) * t.t, 0);
  return t;
}

TensorSquareElement tensor_square(const AbelianGroup& g, const AbElement& x, const AbElement& y) {
  TensorSquareElement t = tensor_zero(g);
  for (int i = 0; i < t.t; ++i)
    for (int j = 0; j < t.t; ++j) {
      i64 m = tensor_modulus(g, i, j);
      t.coords[static_cast<size_t>(i) * t.t + j] = x.c[i] % m * (y.c[j] % m) % m;
    }
  return t;
}

TensorSquareElement tensor_add(const AbelianGroup& g, const TensorSquareElement& a,
                               const TensorSquareElement& b) {
  TensorSquareElement t = a;
  for (int i = 0; i < t.t; ++i)
    for (int j = 0; j < t.t; ++j) {
      i64 m = tensor_modulus(g, i, j);
      auto& v = t.coords[static_cast<size_t>(i) * t.t + j];
      v = (v + b.coords[static_cast<size_t>(i) * t.t + j]) % m;
    }
  return t;
}

TensorSquareElement tensor_sub(const AbelianGroup& g, const TensorSquareElement& a,
                               const TensorSquareElement& b) {
  TensorSquareElement t = a;
  for (int i = 0; i < t.t; ++i)
    for (int j = 0; j < t.t; ++j) {
      i64 m = tensor_modulus(g, i, j);
      auto& v = t.coords[static_cast<size_t>(i) * t.t + j];
      v = ((v - b.coords[static_cast<size_t>(i) * t.t + j]) % m + m) % m;
    }
  return t;
}

TensorSquareElement tensor_apply(const AbelianGroup& g, const AbAutomorphism& theta,
                                 const TensorSquareElement& a) {
  // theta(x) (x) theta(y) expanded bilinearly on generators:
  // w_i (x) w_j -> sum_{k,l} M_{ki} M_{lj} (w_k (x) w_l).
  const int t = a.t;
  TensorSquareElement out = tensor_zero(g);
  for (int k = 0; k < t; ++k)
    for (int l = 0; l < t; ++l) {
      i64 m = tensor_modulus(g, k, l);
      i64 acc = 0;
      for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) {
          i64 coeff = theta.entry(k, i) % m * (theta.entry(l, j) % m) % m;
          acc = (acc + coeff * (a.coords[static_cast<size_t>(i) * t + j] % m)) % m;
        }
      out.coords[static_cast<size_t>(k) * t + l] = (acc % m + m) % m;
    }
  return out;
}

}  // namespace mcg
