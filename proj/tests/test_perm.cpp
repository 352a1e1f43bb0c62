#include <algorithm>
#include <map>

#include "doctest.h"
#include "mcg/perm.hpp"

using namespace mcg;

TEST_CASE("closure sizes") {
  CHECK(closure(4, {}).order() == 1);
  CHECK(closure(4, {Perm::from_cycles1(4, {{1, 2}, {3, 4}})}).order() == 2);
  CHECK(closure(4, {Perm::from_cycles1(4, {{1, 2}}), Perm::from_cycles1(4, {{1, 2, 3, 4}})})
            .order() == 24);
  CHECK_THROWS(closure(4, {Perm(3)}));
}

TEST_CASE("permutation matrices") {
  CHECK(perm_matrix(Perm(3), 5) == FpMatrix::identity(3, 5));
  FpMatrix swap2(2, 2, 3, {0, 1, 1, 0});
  CHECK(perm_matrix(Perm::from_cycles1(2, {{1, 2}}), 3) == swap2);
  // homomorphism, exhaustively over Sigma_4
  for (const auto& a : all_perms(4))
    for (const auto& b : all_perms(4))
      CHECK(perm_matrix(a.then(b), 5) == perm_matrix(a, 5) * perm_matrix(b, 5));
}

TEST_CASE("subgroup class tables") {
  auto t2 = subgroup_classes(2);
  CHECK(t2.classes.size() == 2);

  auto t3 = subgroup_classes(3);
  CHECK(t3.classes.size() == 4);
  std::vector<i64> orders3;
  for (const auto& c : t3.classes) orders3.push_back(c.order);
  CHECK(orders3 == std::vector<i64>{1, 2, 3, 6});

  auto t4 = subgroup_classes(4);
  CHECK(t4.classes.size() == 11);
  CHECK(t4.total_subgroups == 30);
  std::vector<i64> orders4;
  i64 size_sum = 0;
  for (const auto& c : t4.classes) {
    orders4.push_back(c.order);
    size_sum += c.class_size;
  }
  CHECK(orders4 == std::vector<i64>{1, 2, 2, 3, 4, 4, 4, 6, 8, 12, 24});
  CHECK(size_sum == 30);

  // Orbit type per class, in table order.
  std::vector<std::vector<size_t>> orbit_types;
  for (const auto& c : t4.classes) {
    std::vector<size_t> sizes;
    for (const auto& blk : c.orbit_partition) sizes.push_back(blk.size());
    std::sort(sizes.rbegin(), sizes.rend());
    orbit_types.push_back(sizes);
  }
  std::vector<std::vector<size_t>> expected = {
      {1, 1, 1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {2, 2}, {4}, {4}, {3, 1}, {4}, {4}, {4}};
  CHECK(orbit_types == expected);

  CHECK(subgroup_classes(5).classes.size() == 19);
  CHECK_THROWS_AS(subgroup_classes(6), OutOfScope);
}

TEST_CASE("class ordering respects containment up to conjugacy") {
  auto table = subgroup_classes(4);
  auto sym = all_perms(4);
  for (size_t i = 0; i < table.classes.size(); ++i)
    for (size_t j = 0; j < table.classes.size(); ++j) {
      bool contained = false;
      for (const auto& g : sym) {
        auto conj = conjugate(table.classes[i].representative, g);
        bool inside = true;
        for (const auto& e : conj.elements)
          if (!table.classes[j].representative.contains(e)) inside = false;
        if (inside) contained = true;
      }
      if (contained) CHECK(i <= j);
    }
}

TEST_CASE("conjugates resolve to exactly one class") {
  auto table = subgroup_classes(4);
  for (size_t i = 0; i < table.classes.size(); ++i)
    for (const auto& g : all_perms(4)) {
      auto conj = conjugate(table.classes[i].representative, g);
      CHECK(table.class_index(conj) == static_cast<int>(i));
    }
}

TEST_CASE("normalizers in the symmetric group") {
  CHECK(normalizer_in_sym(closure(4, {})).order() == 24);
  CHECK(normalizer_in_sym(closure(4, {Perm::from_cycles1(4, {{1, 2, 3, 4}})})).order() == 8);
  auto s4 = closure(4, {Perm::from_cycles1(4, {{1, 2}}), Perm::from_cycles1(4, {{1, 2, 3, 4}})});
  CHECK(normalizer_in_sym(s4).order() == 24);
}

TEST_CASE("perm basics") {
  auto c = Perm::from_cycles1(4, {{1, 2, 3}});
  CHECK(c.order() == 3);
  CHECK(c.inverse().then(c).is_identity());
  CHECK(c.cycle_type() == std::vector<int>{3, 1});
  CHECK(c.to_string() == "(1 2 3)");
}
