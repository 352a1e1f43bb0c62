#include <set>

#include "doctest.h"
#include "mcg/fp.hpp"

using namespace mcg;

namespace {

FpMatrix mat(int rows, int cols, i64 p, std::vector<i64> e) {
  return FpMatrix(rows, cols, p, std::move(e));
}

// xorshift, deterministic across platforms
struct Rng {
  unsigned long long s = 0x9e3779b97f4a7c15ULL;
  i64 next(i64 bound) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<i64>(s % static_cast<unsigned long long>(bound));
  }
};

}  // namespace

TEST_CASE("rank on the stated examples") {
  CHECK(FpMatrix::identity(2, 5).rank() == 2);
  CHECK(FpMatrix(3, 4, 7).rank() == 0);
  CHECK(mat(2, 2, 5, {1, 2, 2, 4}).rank() == 1);
}

TEST_CASE("kernel bases") {
  CHECK(kernel_basis(FpMatrix::identity(2, 3)).empty());
  CHECK(kernel_basis(FpMatrix(1, 3, 3)).size() == 3);
  auto m = mat(1, 3, 5, {1, 1, 1});
  auto basis = kernel_basis(m);
  REQUIRE(basis.size() == 2);
  for (const auto& x : basis) {
    i64 dot = 0;
    for (int j = 0; j < 3; ++j) dot += x[j];
    CHECK(dot % 5 == 0);
  }
}

TEST_CASE("rank is transpose invariant and kernels annihilate") {
  Rng rng;
  for (int trial = 0; trial < 50; ++trial) {
    i64 p = std::vector<i64>{2, 3, 5, 7}[trial % 4];
    int rows = 1 + static_cast<int>(rng.next(4));
    int cols = 1 + static_cast<int>(rng.next(5));
    FpMatrix m(rows, cols, p);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.set(i, j, rng.next(p));
    CHECK(m.rank() == m.transpose().rank());
    auto basis = kernel_basis(m);
    CHECK(static_cast<int>(basis.size()) == cols - m.rank());
    for (const auto& x : basis)
      for (int i = 0; i < rows; ++i) {
        i64 acc = 0;
        for (int j = 0; j < cols; ++j) acc += m.at(i, j) * x[j];
        CHECK(acc % p == 0);
      }
  }
}

TEST_CASE("GL enumeration counts") {
  auto count_gl = [](int v, i64 p) {
    i64 n = 0;
    for_each_gl(v, p, [&](const FpMatrix&) { ++n; });
    return n;
  };
  CHECK(count_gl(1, 5) == 4);
  CHECK(count_gl(2, 3) == 48);
  CHECK(count_gl(2, 2) == 6);
  for (i64 p : {2, 3, 5}) {
    CHECK(count_gl(1, p) == gl_order(1, p));
    CHECK(count_gl(2, p) == gl_order(2, p));
  }
  CHECK(count_gl(3, 2) == gl_order(3, 2));
  CHECK(count_gl(3, 3) == gl_order(3, 3));
  CHECK_THROWS_AS(for_each_gl(3, 7, [](const FpMatrix&) {}), CeilingExceeded);
  CHECK_THROWS_AS(for_each_gl(4, 2, [](const FpMatrix&) {}), OutOfScope);
}

TEST_CASE("GL range iterates invertibles") {
  int n = 0;
  for (const auto& m : GlRange(2, 3)) {
    CHECK(m.det() != 0);
    ++n;
  }
  CHECK(n == 48);
}

TEST_CASE("subspace counts") {
  CHECK(subspace_count(2, 1, 5) == 6);
  CHECK(subspace_count(3, 0, 7) == 1);

  // Independent oracle for (3,2,3): enumerate 2-dimensional row spaces of
  // F_3^3 by canonical RREF representative.
  std::set<std::vector<i64>> spaces;
  for (i64 a = 0; a < 729; ++a)
    for (i64 b = 0; b < 729; ++b) {
      std::vector<i64> e = {a / 243 % 3, a / 81 % 3, a / 27 % 3,
                            b / 243 % 3, b / 81 % 3, b / 27 % 3};
      e = {a % 3, a / 3 % 3, a / 9 % 3, b % 3, b / 3 % 3, b / 9 % 3};
      FpMatrix m(2, 3, 3, e);
      if (m.rank() != 2) continue;
      spaces.insert(m.rref().entries());
    }
  CHECK(static_cast<i64>(spaces.size()) == 13);
  CHECK(subspace_count(3, 2, 3) == 13);

  for (int v = 1; v <= 3; ++v)
    for (i64 p : {2, 3, 5, 7})
      for (int l = 0; l <= v; ++l) CHECK(subspace_count(v, l, p) == subspace_count(v, v - l, p));
}

TEST_CASE("scalar arithmetic") {
  FpScalar a(3, 5), b(4, 5);
  CHECK((a + b).value == 2);
  CHECK((a * b).value == 2);
  CHECK((-a).value == 2);
  CHECK(a.inv().value == 2);
  CHECK_THROWS(FpScalar(1, 4));
}

TEST_CASE("matrix inverse and determinant") {
  auto m = mat(2, 2, 7, {2, 1, 5, 3});
  auto inv = m.inverse();
  REQUIRE(inv.has_value());
  CHECK(m * *inv == FpMatrix::identity(2, 7));
  CHECK(mat(2, 2, 5, {1, 2, 2, 4}).inverse() == std::nullopt);
  CHECK(mat(2, 2, 5, {1, 2, 2, 4}).det() == 0);
}
