#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mcg/errors.hpp"
#include "mcg/fp.hpp"

namespace mcg {

// Element of a finite abelian group in coordinates: entry i is a residue
// modulo the i-th invariant factor.
struct AbElement {
  std::vector<i64> c;
  auto operator<=>(const AbElement&) const = default;
};

// Finite abelian group presented by invariant factors n_1 >= n_2 >= ...
// with n_{i+1} | n_i and every n_i >= 2.
class AbelianGroup {
public:
  explicit AbelianGroup(std::vector<i64> factors);

  int rank() const { return static_cast<int>(n_.size()); }
  i64 factor(int i) const { return n_[i]; }
  const std::vector<i64>& factors() const { return n_; }
  i64 order() const;
  i64 exponent() const { return n_.empty() ? 1 : n_.front(); }

  // True when all invariant factors equal one prime; reports it.
  bool is_elementary(i64* p = nullptr) const;

  AbElement zero() const { return AbElement{std::vector<i64>(n_.size(), 0)}; }
  AbElement reduce(std::vector<i64> coords) const;
  AbElement add(const AbElement& x, const AbElement& y) const;
  AbElement sub(const AbElement& x, const AbElement& y) const;
  AbElement neg(const AbElement& x) const;
  AbElement scale(i64 k, const AbElement& x) const;
  // x = coefficient vector on the standard generators w_1..w_t.
  AbElement generator(int i) const;
  i64 element_order(const AbElement& x) const;
  bool is_zero(const AbElement& x) const;

  // Mixed-radix element index; coordinate 0 is most significant, so index
  // order agrees with lexicographic order on coordinate vectors.
  std::uint64_t encode(const AbElement& x) const;
  AbElement decode(std::uint64_t idx) const;

  bool operator==(const AbelianGroup&) const = default;

private:
  std::vector<i64> n_;
};

// Automorphism given by an integer matrix: column j holds the coordinates
// of the image of generator w_j.  Well-definedness (column orders divide
// the generator orders) and bijectivity are verified on construction.
class AbAutomorphism {
public:
  static std::optional<AbAutomorphism> create(const AbelianGroup& g,
                                              const std::vector<std::vector<i64>>& matrix,
                                              i64 semantic_ceiling = Ceilings{}.automorphisms);
  static AbAutomorphism identity(const AbelianGroup& g);

  const AbelianGroup& group() const { return g_; }
  AbElement apply(const AbElement& x) const;
  AbAutomorphism then(const AbAutomorphism& o) const;  // apply *this first
  i64 entry(int i, int j) const { return m_[static_cast<size_t>(i) * g_.rank() + j]; }

  bool operator==(const AbAutomorphism& o) const { return m_ == o.m_ && g_ == o.g_; }

private:
  AbAutomorphism(AbelianGroup g, std::vector<i64> m) : g_(std::move(g)), m_(std::move(m)) {}
  AbelianGroup g_;
  std::vector<i64> m_;  // row-major t x t
};

// Signature (rho; m_1,...,m_r); no periods means an unramified action.
struct Signature {
  i64 orbit_genus = 0;
  std::vector<i64> periods;

  int branch_count() const { return static_cast<int>(periods.size()); }
  bool operator==(const Signature&) const = default;
};

// Solves the Riemann-Hurwitz identity
//   (2*sigma - 2)/|G| = (2*rho - 2 + r) - sum 1/m_j
// for sigma.  A non-integral sigma means the signature is infeasible and
// yields nullopt rather than an error.
std::optional<i64> genus_from_signature(i64 group_order, const Signature& sig);

// Yields each automorphism exactly once.  Requires |G| at most the
// configured ceiling.
void for_each_automorphism(const AbelianGroup& g,
                           const std::function<void(const AbAutomorphism&)>& fn,
                           i64 ceiling = Ceilings{}.automorphisms);
std::vector<AbAutomorphism> enumerate_automorphisms(const AbelianGroup& g,
                                                    i64 ceiling = Ceilings{}.automorphisms);

// A small generating set of Aut(G): transvection-style generators plus one
// scalar for elementary abelian groups, a greedily chosen set otherwise.
std::vector<AbAutomorphism> automorphism_generators(const AbelianGroup& g,
                                                    i64 ceiling = Ceilings{}.automorphisms);

// Element of G (x) G with coordinate (i,j) taken modulo gcd(n_i, n_j).
struct TensorSquareElement {
  int t = 0;
  std::vector<i64> coords;  // row-major t x t
  bool operator==(const TensorSquareElement&) const = default;
};

i64 tensor_modulus(const AbelianGroup& g, int i, int j);
TensorSquareElement tensor_zero(const AbelianGroup& g);
TensorSquareElement tensor_square(const AbelianGroup& g, const AbElement& x, const AbElement& y);
TensorSquareElement tensor_add(const AbelianGroup& g, const TensorSquareElement& a,
                               const TensorSquareElement& b);
TensorSquareElement tensor_sub(const AbelianGroup& g, const TensorSquareElement& a,
                               const TensorSquareElement& b);
// Image of a tensor under theta (x) theta.
TensorSquareElement tensor_apply(const AbelianGroup& g, const AbAutomorphism& theta,
                                 const TensorSquareElement& a);

}  // namespace mcg
