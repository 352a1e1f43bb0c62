#pragma once

#include <string>
#include <vector>

#include "mcg/fp.hpp"
#include "mcg/perm.hpp"

namespace mcg {

// The matrix space Omega of totally ramified elementary abelian actions:
// v x r matrices of rank v with nonzero columns summing to zero, acted on
// by GL(v, F_p) x Sigma_r via (g, alpha) . X = g X pi_alpha^T.

struct OmegaMatrix {
  FpMatrix x;
};

bool is_omega(const FpMatrix& x);
OmegaMatrix make_omega(FpMatrix x);  // validates

struct ActionElement {
  FpMatrix g;
  Perm alpha;

  ActionElement operator*(const ActionElement& o) const {
    return ActionElement{g * o.g, alpha.then(o.alpha)};
  }
};

OmegaMatrix act(const ActionElement& a, const OmegaMatrix& x);

// Closed forms: omega_bar counts nonzero columns summing to zero, omega
// additionally requires full rank.
i64 omega_bar_count(int v, int r, i64 p);
i64 omega_count(int v, int r, i64 p);

// Count of full-rank tuples (X_1..X_s), all nonzero, with sum a_i X_i = 0
// for fixed nonzero scalars a_i; equals omega_count(v, s, p).
i64 scaled_sum_count(const std::vector<i64>& coeffs, int v, i64 p);

// Number of primitive n-th roots of unity in F_p.
i64 beta_n(i64 n, i64 p);

void for_each_omega(int v, int r, i64 p, const std::function<void(const FpMatrix&)>& fn,
                    i64 ceiling = Ceilings{}.enumeration);

class OmegaRange {
public:
  OmegaRange(int v, int r, i64 p, i64 ceiling = Ceilings{}.enumeration);

  class iterator {
  public:
    iterator() = default;
    iterator(int v, int r, i64 p, bool end);
    const FpMatrix& operator*() const { return cur_; }
    iterator& operator++();
    bool operator!=(const iterator& o) const { return done_ != o.done_; }

  private:
    void advance();
    int v_ = 0, r_ = 0;
    i64 p_ = 2;
    std::vector<i64> digits_;
    FpMatrix cur_;
    bool done_ = true;
    bool fresh_ = false;
  };

  iterator begin() const { return iterator(v_, r_, p_, false); }
  iterator end() const { return iterator(v_, r_, p_, true); }

private:
  int v_, r_;
  i64 p_;
};

// A conjugacy-class representative of a subgroup fixing at least one point,
// carried as its permutation part together with the table of the matrix
// part (q is injectively determined by the permutation on a stabilizer).
struct SubgroupRecord {
  PermSubgroup hprime;
  std::vector<FpMatrix> q;  // aligned with hprime.elements
  i64 order = 0;
  i64 normalizer_size = 0;
  i64 fixed_set_size = 0;
  int perm_class_index = -1;
  std::string label;
};

// Full stabilizer {(g, alpha) : g X pi_alpha^T = X}; the matrix part is the
// unique solution per permutation because X has rank v.
SubgroupRecord point_stabilizer(const OmegaMatrix& x, const Ceilings& ceilings = Ceilings{});

// |Omega^H| by walking the intertwiner solution space: solve
// q(h) X = X pi(h) for all h plus zero column sums, then count members of
// full rank with nonzero columns.
i64 fixed_set_size(const PermSubgroup& hprime, const std::vector<FpMatrix>& q, int v, int r,
                   i64 p, const Ceilings& ceilings = Ceilings{});
i64 fixed_set_size(const SubgroupRecord& rec, int v, int r, i64 p,
                   const Ceilings& ceilings = Ceilings{});

struct FixedPointReport {
  bool fixes = false;
  bool dominated = false;  // reduced natural representation dominates q
  std::vector<bool> orbit_common_irreducible;
  i64 fixed_count = 0;
};

// Decides fixed-point existence and reports the two structural conditions
// (dominance, and a common irreducible with every orbit representation),
// all via intertwiner-space linear algebra.
FixedPointReport has_fixed_point(const PermSubgroup& hprime, const std::vector<FpMatrix>& q,
                                 int v, int r, i64 p, const Ceilings& ceilings = Ceilings{});

// |Z| * |N''| with Z the centralizer of q(H') in GL(v,p) and N'' the part
// of N_{Sigma_r}(H') fixing the equivalence class of q.
i64 normalizer_size(const PermSubgroup& hprime, const std::vector<FpMatrix>& q, int v, i64 p,
                    const Ceilings& ceilings = Ceilings{});

// Conjugacy classes of subgroups with nonempty fixed sets, discovered by
// scanning orbit representatives of Omega and closing downward, ordered
// compatibly with containment up to conjugacy.  Requires p > r.
std::vector<SubgroupRecord> stabilizer_classes(int v, int r, i64 p,
                                               const Ceilings& ceilings = Ceilings{});

// Independent construction: enumerate candidate (H', q) pairs over the
// subgroup classes of Sigma_r and keep those fixing a point.  Used to
// cross-check the scan.
std::vector<SubgroupRecord> stabilizer_classes_constructive(int v, int r, i64 p,
                                                            const Ceilings& ceilings = Ceilings{});

// True when scan and construction discover identical class inventories.
bool stabilizer_discovery_agrees(int v, int r, i64 p, const Ceilings& ceilings = Ceilings{});

struct StrataReport {
  int v = 0, r = 0;
  i64 p = 0;
  std::vector<SubgroupRecord> classes;
  std::vector<std::vector<i64>> d_matrix;  // containment counts d_{i,j}
  std::vector<std::vector<i64>> u_matrix;  // S^{-1} D S
  std::vector<i64> s_sizes;                // conjugacy class sizes
  std::vector<i64> n_sizes;                // normalizer orders
  std::vector<i64> t_sizes;                // subgroup orders
  std::vector<i64> l;                      // |Omega^{H_i}|
  std::vector<i64> l_iso;                  // |isotropic stratum|
  std::vector<i64> e_strata;               // |equisymmetric stratum|
  std::vector<i64> orbit_counts;           // orbits per stratum
  i64 group_order = 0;                     // |GL(v,p)| * r!
  i64 omega_size = 0;
  i64 total = 0;
};

StrataReport build_strata_report(const std::vector<SubgroupRecord>& classes, int v, int r, i64 p,
                                 const Ceilings& ceilings = Ceilings{});
StrataReport build_strata_report(int v, int r, i64 p, const Ceilings& ceilings = Ceilings{});

// Brute-force orbit count of Omega under GL(v,p) x Sigma_r.
i64 orbit_count_oracle(int v, int r, i64 p, const Ceilings& ceilings = Ceilings{});

// Published closed forms for 3 and 4 branch points, evaluated per prime.
i64 table51(int r, int v, i64 p);

// The unique class representative [ I_v | -ones ] when r = v + 1.
OmegaMatrix unique_when_r_is_v_plus_1(int v, i64 p);

}  // namespace mcg
