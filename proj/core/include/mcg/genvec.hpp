#pragma once

#include <string>
#include <vector>

#include "mcg/abelian.hpp"

namespace mcg {

// The classified object: images (A_1..A_rho, B_1..B_rho, C_1..C_r) of the
// standard generators of a Fuchsian group of the given signature.
struct GeneratingVector {
  AbelianGroup group;
  Signature sig;
  std::vector<AbElement> a, b, c;

  bool operator==(const GeneratingVector&) const = default;
};

GeneratingVector make_generating_vector(const AbelianGroup& g, const Signature& sig,
                                        std::vector<AbElement> a, std::vector<AbElement> b,
                                        std::vector<AbElement> c);

struct ValidityReport {
  std::vector<int> order_mismatch;  // indices j with order(C_j) != m_j
  bool sum_zero = true;
  bool surjective = true;

  bool ok() const { return order_mismatch.empty() && sum_zero && surjective; }
};

ValidityReport validate(const GeneratingVector& gv);

// True iff the coordinates generate G (checked prime by prime on G/qG).
bool spans_group(const AbelianGroup& g, const std::vector<AbElement>& elems);

// The abelianized mapping-class moves.  k-powers are explicit; T requires
// equal periods on the swapped branch points.
enum class MoveKind {
  HandleA,   // B_i -> B_i + k A_i
  HandleB,   // A_i -> A_i + k B_i
  HandleZ,   // A_i -> A_i + k A_{i+1},  B_{i+1} -> B_{i+1} - k B_i
  HandleR,   // A_i -> B_i, B_i -> -A_i
  HandleS,   // (A_i,B_i) <-> (A_{i+1},B_{i+1})
  EllipticT, // C_j <-> C_{j+1}  (m_j = m_{j+1})
  MixedU,    // B_i -> B_i + k C_j
  MixedV,    // A_i -> A_i + k C_j
};

struct Move {
  MoveKind kind;
  int i = 0;  // handle index (0-based)
  int j = 0;  // second handle / branch index (0-based)
  i64 k = 1;
};

std::string move_to_string(const Move& m);

GeneratingVector apply_move(const GeneratingVector& gv, const Move& m);

// Sum over handles of A_i (x) B_i - B_i (x) A_i.  For ramified vectors the
// raw tensor is not move-invariant (mixed moves shift it by elementary
// tensors with one elliptic leg), so the comparable value is the canonical
// coset representative modulo the subgroup spanned by
// { w_a (x) C_j - C_j (x) w_a }.  For r = 0 the two coincide.
struct CupInvariant {
  TensorSquareElement raw;
  TensorSquareElement canonical;
};

CupInvariant cup_invariant(const GeneratingVector& gv,
                           const Ceilings& ceilings = Ceilings{});

// True iff some theta in Aut(G) carries the cup invariant of gv1 to that of
// gv2 under theta (x) theta (and the elliptic spans onto each other when
// branch points are present).
bool cup_equivalent_mod_aut(const GeneratingVector& gv1, const GeneratingVector& gv2,
                            const Ceilings& ceilings = Ceilings{});

struct OracleOptions {
  Ceilings ceilings{};
  unsigned shuffle_seed = 0;  // permutes generator order; results identical
};

struct OrbitClasses {
  i64 count = 0;
  std::vector<GeneratingVector> representatives;  // lex-least per orbit
  std::uint64_t valid_tuples = 0;
};

// Independent brute-force oracle: enumerates every valid generating vector
// and partitions them under the finite move set composed with Aut(G).
OrbitClasses orbit_classes_oracle(const AbelianGroup& g, const Signature& sig,
                                  const OracleOptions& opts = OracleOptions{});

}  // namespace mcg
