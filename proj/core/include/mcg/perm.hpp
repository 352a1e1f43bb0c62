#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "mcg/fp.hpp"

namespace mcg {

// Permutation of {1..r}, stored 0-based.  Composition is left-to-right:
// (a.then(b))(i) = b(a(i)), which makes alpha -> perm_matrix(alpha) a
// homomorphism for the row convention used by perm_matrix.
class Perm {
public:
  Perm() = default;
  explicit Perm(int degree);
  static Perm from_images0(std::vector<int> images);
  // images given 1-based, e.g. {2,1,3,4} for the transposition (1 2).
  static Perm from_images1(const std::vector<int>& images);
  static Perm from_cycles1(int degree, const std::vector<std::vector<int>>& cycles);

  int degree() const { return static_cast<int>(img_.size()); }
  int operator()(int i) const { return img_[i]; }

  Perm then(const Perm& o) const;
  Perm operator*(const Perm& o) const { return then(o); }
  Perm inverse() const;
  bool is_identity() const;
  int order() const;

  // Cycle type as a descending partition of the degree.
  std::vector<int> cycle_type() const;
  std::vector<std::vector<int>> cycles1() const;
  std::string to_string() const;

  std::uint64_t pack() const;
  auto operator<=>(const Perm&) const = default;

private:
  std::vector<int> img_;
};

// Permutation matrix with rows E_{alpha(1)}, ..., E_{alpha(r)} of the
// identity, so that the matrix map is multiplicative for `then`.
FpMatrix perm_matrix(const Perm& alpha, i64 p);

std::vector<Perm> all_perms(int degree);

struct PermSubgroup {
  int degree = 0;
  std::vector<Perm> elements;  // sorted, closed, contains identity
  std::vector<Perm> generators;

  i64 order() const { return static_cast<i64>(elements.size()); }
  bool contains(const Perm& g) const;
  bool operator==(const PermSubgroup& o) const {
    return degree == o.degree && elements == o.elements;
  }
  // Orbits of the natural action on {1..r}, as sorted 1-based blocks.
  std::vector<std::vector<int>> orbit_partition() const;
};

// Smallest subgroup containing the generators.  All generators must share
// one degree; degree is capped at 6.
PermSubgroup closure(int degree, const std::vector<Perm>& gens);

PermSubgroup conjugate(const PermSubgroup& h, const Perm& g);

// N' = { alpha in Sigma_r : alpha H alpha^-1 = H }.
PermSubgroup normalizer_in_sym(const PermSubgroup& h);

struct SubgroupClass {
  PermSubgroup representative;  // lexicographically least member of the class
  i64 class_size = 0;
  i64 order = 0;
  std::vector<std::vector<int>> orbit_partition;
  std::string name;
};

struct SubgroupClassTable {
  int degree = 0;
  std::vector<SubgroupClass> classes;
  i64 total_subgroups = 0;

  // Index of the class containing h, by conjugacy.
  int class_index(const PermSubgroup& h) const;
};

// One representative per Sigma_r-conjugacy class of subgroups, ordered so
// that containment up to conjugacy implies earlier-or-equal index; ties
// broken by (order, lexicographically smallest element list).  r <= 5.
SubgroupClassTable subgroup_classes(int r);

}  // namespace mcg
