#include "mcg/fp.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace mcg {

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

i64 mod_pow(i64 base, i64 exp, i64 m) {
  i64 r = 1 % m;
  base %= m;
  if (base < 0) base += m;
  while (exp > 0) {
    if (exp & 1) r = r * base % m;
    base = base * base % m;
    exp >>= 1;
  }
  return r;
}

i64 mod_inv(i64 a, i64 p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw std::invalid_argument("mod_inv: zero is not invertible");
  // p prime, so Fermat suffices.
  return mod_pow(a, p - 2, p);
}

namespace {
i64 reduce(i64 v, i64 p) {
  v %= p;
  if (v < 0) v += p;
  return v;
}

void check_prime_modulus(i64 p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus must be prime");
  if (p >= (1LL << 31)) throw std::invalid_argument("modulus too large for native arithmetic");
}
}  // namespace

FpScalar::FpScalar(i64 v, i64 prime) : value(reduce(v, prime)), p(prime) {
  check_prime_modulus(prime);
}

FpScalar FpScalar::operator+(FpScalar o) const { return FpScalar(value + o.value, p); }
FpScalar FpScalar::operator-(FpScalar o) const { return FpScalar(value - o.value, p); }
FpScalar FpScalar::operator*(FpScalar o) const { return FpScalar(value * o.value, p); }
FpScalar FpScalar::operator-() const { return FpScalar(-value, p); }
FpScalar FpScalar::inv() const { return FpScalar(mod_inv(value, p), p); }

FpMatrix::FpMatrix(int rows, int cols, i64 p)
    : rows_(rows), cols_(cols), p_(p), e_(static_cast<size_t>(rows) * cols, 0) {
  check_prime_modulus(p);
}

FpMatrix::FpMatrix(int rows, int cols, i64 p, std::vector<i64> entries)
    : rows_(rows), cols_(cols), p_(p), e_(std::move(entries)) {
  check_prime_modulus(p);
  if (e_.size() != static_cast<size_t>(rows) * cols)
    throw std::invalid_argument("FpMatrix: entry count does not match shape");
  for (auto& v : e_) v = reduce(v, p_);
}

FpMatrix FpMatrix::identity(int n, i64 p) {
  FpMatrix m(n, n, p);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void FpMatrix::set(int i, int j, i64 v) {
  e_[static_cast<size_t>(i) * cols_ + j] = reduce(v, p_);
}

FpMatrix FpMatrix::operator*(const FpMatrix& o) const {
  if (cols_ != o.rows_ || p_ != o.p_)
    throw std::invalid_argument("FpMatrix: incompatible product");
  FpMatrix r(rows_, o.cols_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      i64 a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols_; ++j)
        r.e_[static_cast<size_t>(i) * o.cols_ + j] =
            (r.e_[static_cast<size_t>(i) * o.cols_ + j] + a * o.at(k, j)) % p_;
    }
  return r;
}

FpMatrix FpMatrix::operator+(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_)
    throw std::invalid_argument("FpMatrix: incompatible sum");
  FpMatrix r(rows_, cols_, p_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = (e_[i] + o.e_[i]) % p_;
  return r;
}

FpMatrix FpMatrix::operator-(const FpMatrix& o) const { return *this + (-o); }

FpMatrix FpMatrix::operator-() const {
  FpMatrix r(rows_, cols_, p_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = reduce(-e_[i], p_);
  return r;
}

FpMatrix FpMatrix::transpose() const {
  FpMatrix r(cols_, rows_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  return r;
}

i64 FpMatrix::trace() const {
  i64 t = 0;
  for (int i = 0; i < rows_ && i < cols_; ++i) t = (t + at(i, i)) % p_;
  return t;
}

FpMatrix FpMatrix::rref(std::vector<int>* pivot_cols) const {
  FpMatrix m = *this;
  if (pivot_cols) pivot_cols->clear();
  int row = 0;
  for (int col = 0; col < cols_ && row < rows_; ++col) {
    int pivot = -1;
    for (int i = row; i < rows_; ++i)
      if (m.at(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int j = 0; j < cols_; ++j) {
        i64 t = m.at(row, j);
        m.set(row, j, m.at(pivot, j));
        m.set(pivot, j, t);
      }
    i64 inv = mod_inv(m.at(row, col), p_);
    for (int j = 0; j < cols_; ++j) m.set(row, j, m.at(row, j) * inv % p_);
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      i64 f = m.at(i, col);
      if (f == 0) continue;
      for (int j = 0; j < cols_; ++j)
        m.set(i, j, m.at(i, j) - f * m.at(row, j) % p_);
    }
    if (pivot_cols) pivot_cols->push_back(col);
    ++row;
  }
  return m;
}

int FpMatrix::rank() const {
  std::vector<int> pivots;
  rref(&pivots);
  return static_cast<int>(pivots.size());
}

i64 FpMatrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("det: square matrix required");
  FpMatrix m = *this;
  i64 d = 1;
  for (int col = 0; col < cols_; ++col) {
    int pivot = -1;
    for (int i = col; i < rows_; ++i)
      if (m.at(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = 0; j < cols_; ++j) {
        i64 t = m.at(col, j);
        m.set(col, j, m.at(pivot, j));
        m.set(pivot, j, t);
      }
      d = reduce(-d, p_);
    }
    d = d * m.at(col, col) % p_;
    i64 inv = mod_inv(m.at(col, col), p_);
    for (int i = col + 1; i < rows_; ++i) {
      i64 f = m.at(i, col) * inv % p_;
      if (f == 0) continue;
      for (int j = col; j < cols_; ++j)
        m.set(i, j, m.at(i, j) - f * m.at(col, j) % p_);
    }
  }
  return d;
}

std::optional<FpMatrix> FpMatrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse: square matrix required");
  FpMatrix aug(rows_, 2 * cols_, p_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.set(i, j, at(i, j));
    aug.set(i, cols_ + i, 1);
  }
  std::vector<int> pivots;
  FpMatrix red = aug.rref(&pivots);
  if (static_cast<int>(pivots.size()) != rows_ || pivots.back() >= cols_) return std::nullopt;
  FpMatrix inv(rows_, cols_, p_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.set(i, j, red.at(i, cols_ + j));
  return inv;
}

int rank(const FpMatrix& m) { return m.rank(); }

std::vector<std::vector<i64>> kernel_basis(const FpMatrix& m) {
  std::vector<int> pivots;
  FpMatrix red = m.rref(&pivots);
  const i64 p = m.modulus();
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<i64>> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<i64> v(m.cols(), 0);
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = (p - red.at(static_cast<int>(r), free)) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

i64 gl_order(int v, i64 p) {
  i64 r = 1;
  i64 pj = 1;
  for (int j = 1; j <= v; ++j) {
    pj *= p;
    r *= (pj - 1);
  }
  for (int e = 0; e < v * (v - 1) / 2; ++e) r *= p;
  return r;
}

i64 subspace_count(int v, int l, i64 p) {
  if (l < 0 || l > v) throw std::invalid_argument("subspace_count: need 0 <= l <= v");
  // n_{v,l} = prod_{j=l+1..v}(p^j-1) / prod_{j=1..v-l}(p^j-1)
  __int128 num = 1, den = 1;
  i64 pj = 1;
  for (int j = 1; j <= v; ++j) {
    pj *= p;
    if (j > l) num *= (pj - 1);
    if (j <= v - l) den *= (pj - 1);
  }
  return static_cast<i64>(num / den);
}

namespace {
void check_gl_enumerable(int v, i64 p, i64 ceiling) {
  if (v < 1 || v > 3) throw OutOfScope("for_each_gl: dimension must be 1..3");
  __int128 candidates = 1;
  for (int i = 0; i < v * v; ++i) {
    candidates *= p;
    if (candidates > ceiling)
      throw CeilingExceeded("for_each_gl: p^(v^2) exceeds enumeration ceiling");
  }
}
}  // namespace

void for_each_gl(int v, i64 p, const std::function<void(const FpMatrix&)>& fn, i64 ceiling) {
  check_prime_modulus(p);
  check_gl_enumerable(v, p, ceiling);
  const int n2 = v * v;
  std::vector<i64> digits(n2, 0);
  FpMatrix m(v, v, p);
  while (true) {
    for (int i = 0; i < n2; ++i) m.set(i / v, i % v, digits[i]);
    if (m.det() != 0) fn(m);
    int pos = n2 - 1;
    while (pos >= 0 && digits[pos] == p - 1) digits[pos--] = 0;
    if (pos < 0) break;
    ++digits[pos];
  }
}

GlRange::GlRange(int v, i64 p, i64 ceiling) : v_(v), p_(p) {
  check_prime_modulus(p);
  check_gl_enumerable(v, p, ceiling);
}

GlRange::iterator::iterator(int v, i64 p, bool end)
    : v_(v), p_(p), digits_(static_cast<size_t>(v) * v, 0), cur_(v, v, p), done_(end) {
  if (!end) {
    fresh_ = true;
    advance();
  }
}

void GlRange::iterator::advance() {
  const int n2 = v_ * v_;
  while (true) {
    if (!fresh_) {
      int pos = n2 - 1;
      while (pos >= 0 && digits_[pos] == p_ - 1) digits_[pos--] = 0;
      if (pos < 0) {
        done_ = true;
        return;
      }
      ++digits_[pos];
    }
    fresh_ = false;
    for (int i = 0; i < n2; ++i) cur_.set(i / v_, i % v_, digits_[i]);
    if (cur_.det() != 0) return;
  }
}

GlRange::iterator& GlRange::iterator::operator++() {
  advance();
  return *this;
}

}  // namespace mcg
