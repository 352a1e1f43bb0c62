#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mcg/errors.hpp"

namespace mcg {

using i64 = long long;

bool is_prime(i64 n);
i64 mod_pow(i64 base, i64 exp, i64 m);
// Inverse of a modulo the prime p.
i64 mod_inv(i64 a, i64 p);

// One residue of F_p.  Arithmetic keeps the value in [0, p).
struct FpScalar {
  i64 value = 0;
  i64 p = 2;

  FpScalar() = default;
  FpScalar(i64 v, i64 prime);

  FpScalar operator+(FpScalar o) const;
  FpScalar operator-(FpScalar o) const;
  FpScalar operator*(FpScalar o) const;
  FpScalar operator-() const;
  FpScalar inv() const;
  bool operator==(const FpScalar&) const = default;
};

// Dense row-major matrix over F_p.  Values are machine integers reduced
// after every arithmetic step; p must be prime and small enough that p*p
// fits in i64.
class FpMatrix {
public:
  FpMatrix() : rows_(0), cols_(0), p_(2) {}
  FpMatrix(int rows, int cols, i64 p);
  FpMatrix(int rows, int cols, i64 p, std::vector<i64> entries);

  static FpMatrix identity(int n, i64 p);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  i64 modulus() const { return p_; }

  i64 at(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
  void set(int i, int j, i64 v);
  FpScalar scalar_at(int i, int j) const { return FpScalar(at(i, j), p_); }

  FpMatrix operator*(const FpMatrix& o) const;
  FpMatrix operator+(const FpMatrix& o) const;
  FpMatrix operator-(const FpMatrix& o) const;
  FpMatrix operator-() const;
  bool operator==(const FpMatrix& o) const = default;

  FpMatrix transpose() const;
  i64 trace() const;
  i64 det() const;
  std::optional<FpMatrix> inverse() const;

  // Reduced row echelon form with deterministic leftmost-pivot selection;
  // RREF representatives double as canonical labels elsewhere.
  FpMatrix rref(std::vector<int>* pivot_cols = nullptr) const;
  int rank() const;

  const std::vector<i64>& entries() const { return e_; }

private:
  int rows_, cols_;
  i64 p_;
  std::vector<i64> e_;
};

int rank(const FpMatrix& m);

// Basis of the right null space {x : Mx = 0}; size is cols - rank.
std::vector<std::vector<i64>> kernel_basis(const FpMatrix& m);

// |GL_v(F_p)| = prod_{j=1..v} (p^j - 1) * p^{(v^2-v)/2}
i64 gl_order(int v, i64 p);

// Number n_{v,l} of l-dimensional subspaces of F_p^v.
i64 subspace_count(int v, int l, i64 p);

// Visits every invertible v x v matrix over F_p exactly once.  Requires
// v <= 3 and p^(v^2) at most `ceiling` candidate matrices.
void for_each_gl(int v, i64 p, const std::function<void(const FpMatrix&)>& fn,
                 i64 ceiling = Ceilings{}.enumeration);

// Range wrapper over for_each_gl semantics for callers that want iteration.
class GlRange {
public:
  GlRange(int v, i64 p, i64 ceiling = Ceilings{}.enumeration);

  class iterator {
  public:
    using value_type = FpMatrix;
    iterator() = default;
    iterator(int v, i64 p, bool end);
    const FpMatrix& operator*() const { return cur_; }
    iterator& operator++();
    bool operator!=(const iterator& o) const { return done_ != o.done_; }

  private:
    void advance();
    int v_ = 0;
    i64 p_ = 2;
    std::vector<i64> digits_;
    FpMatrix cur_;
    bool done_ = true;
    bool fresh_ = false;
  };

  iterator begin() const { return iterator(v_, p_, false); }
  iterator end() const { return iterator(v_, p_, true); }

private:
  int v_;
  i64 p_;
};

}  // namespace mcg
