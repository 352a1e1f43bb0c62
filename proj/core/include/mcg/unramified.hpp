#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mcg/genvec.hpp"

namespace mcg {

// Fixed-point-free (r = 0) classification.

// Number of equivalence classes of unramified actions of an elementary
// abelian group of rank r on orbit genus rho: the number of admissible
// values of the canonical-form parameter K, i.e. ceil(r/2) <= K <= min(rho, r).
i64 count_elementary(i64 rho, i64 r);

struct CanonicalUnramified {
  i64 k = 0;
  GeneratingVector vec;
};

// One representative per class: alpha_i -> w_i for i <= K, beta_i -> w_{i+K}
// for i <= w-K, zero elsewhere.  Empty when w > 2*rho.
std::vector<CanonicalUnramified> canonical_reps_elementary(i64 p, int w, i64 rho);

// All normal-form vectors of the reduction target family for an abelian
// group at orbit genus rho, coefficients ranging over the residues allowed
// by the side conditions.  Every unramified epimorphism is equivalent to at
// least one listed vector; distinct entries may still coincide as classes.
std::vector<GeneratingVector> normal_form_candidates(const AbelianGroup& g, i64 rho);

bool is_normal_form(const GeneratingVector& gv);

using ReductionStep = std::variant<Move, AbAutomorphism>;

struct ReductionResult {
  GeneratingVector reduced;
  std::vector<ReductionStep> word;  // replaying on the input gives `reduced`
};

GeneratingVector apply_reduction_word(const GeneratingVector& gv,
                                      const std::vector<ReductionStep>& word);

// Rewrites an unramified generating vector into normal form.  Cyclic groups
// use a deterministic gcd schedule; otherwise the orbit is searched for its
// lexicographically least normal-form member.  The returned word is always
// replayed against the input before returning.
ReductionResult reduce_abelian(const GeneratingVector& gv, const Ceilings& ceilings = Ceilings{});

// d(n2) for squarefree n2: the exact class count for rank-2 groups with
// second invariant factor n2 at orbit genus >= 2.
i64 count_rank2_squarefree(i64 n2);

// Classes for rank-r groups whose second invariant factor is prime; the
// count is the same admissible-K count as the elementary case.
i64 count_rank_r_n2_prime(i64 rho, i64 r);

struct UnramifiedClassification {
  i64 class_count = 0;
  bool exact = true;  // false = upper bound only
  std::vector<GeneratingVector> representatives;
  std::string method;  // "elementary", "cup-separation", "oracle", "candidates"
  i64 candidate_count = 0;
};

// Full classification pipeline: candidates, cup-product separation, oracle
// confirmation when the search space fits the ceiling.
UnramifiedClassification classify_unramified(const AbelianGroup& g, i64 rho,
                                             const Ceilings& ceilings = Ceilings{});

}  // namespace mcg
