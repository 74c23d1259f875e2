#pragma once

// Exact rational scalars and the small amount of dense rational linear
// algebra the Gram machinery needs: rank, nullspace and minimum-norm solves.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ncsos {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "12", "-3/4" or "0.125" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  bool negative = false;
  std::size_t pos = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  std::string body = s.substr(pos);
  auto all_digits = [](const std::string& t) {
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  Rational value;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed fraction '" + s + "'");
    mpz_class d(den, 10);
    if (d == 0) throw std::domain_error("fraction with zero denominator");
    value = Rational(mpz_class(num, 10), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    std::string whole = body.substr(0, dot), frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + s + "'");
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Rational(mpz_class(whole + frac, 10), scale);
  } else {
    if (!all_digits(body))
      throw std::invalid_argument("malformed integer '" + s + "'");
    value = Rational(mpz_class(body, 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  RationalMatrix block(std::size_t r0, std::size_t c0, std::size_t nr,
                       std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
      throw std::out_of_range("block exceeds matrix bounds");
    RationalMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (sgn(v) != 0) return false;
    return true;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend RationalMatrix operator+(RationalMatrix a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw std::invalid_argument("matrix size mismatch in addition");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }

  friend RationalMatrix operator*(const Rational& s, RationalMatrix a) {
    for (auto& v : a.data_) v *= s;
    return a;
  }

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_)
      throw std::invalid_argument("matrix size mismatch in product");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

namespace detail {

// Reduced row echelon form in place; returns pivot columns in row order.
inline std::vector<std::size_t> rref(RationalMatrix& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pick = row;
    while (pick < a.rows() && sgn(a(pick, col)) == 0) ++pick;
    if (pick == a.rows()) continue;
    if (pick != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(pick, j));
    Rational inv = 1 / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || sgn(a(i, col)) == 0) continue;
      Rational f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

/// Exact rank by Gaussian elimination with full pivoting. Among the nonzero
/// candidates the pivot with the smallest numerator/denominator size is used
/// to keep intermediate growth down.
inline std::size_t rank(RationalMatrix a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> row_perm(rows), col_perm(cols);
  for (std::size_t i = 0; i < rows; ++i) row_perm[i] = i;
  for (std::size_t j = 0; j < cols; ++j) col_perm[j] = j;
  auto at = [&](std::size_t i, std::size_t j) -> Rational& {
    return a(row_perm[i], col_perm[j]);
  };
  std::size_t r = 0;
  for (; r < std::min(rows, cols); ++r) {
    std::size_t best_i = rows, best_j = cols, best_size = 0;
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t j = r; j < cols; ++j) {
        const Rational& v = at(i, j);
        if (sgn(v) == 0) continue;
        std::size_t size = mpz_sizeinbase(v.get_num_mpz_t(), 2) +
                           mpz_sizeinbase(v.get_den_mpz_t(), 2);
        if (best_i == rows || size < best_size) {
          best_i = i;
          best_j = j;
          best_size = size;
        }
      }
    if (best_i == rows) break;
    std::swap(row_perm[r], row_perm[best_i]);
    std::swap(col_perm[r], col_perm[best_j]);
    const Rational pivot = at(r, r);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (sgn(at(i, r)) == 0) continue;
      Rational f = at(i, r) / pivot;
      for (std::size_t j = r; j < cols; ++j)
        if (sgn(at(r, j)) != 0) at(i, j) -= f * at(r, j);
    }
  }
  return r;
}

/// Basis of {x : A x = 0}, one vector per free column, in column order.
inline std::vector<std::vector<Rational>> nullspace(RationalMatrix a) {
  auto pivots = detail::rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(a.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Minimum Euclidean-norm solution of A x = b, or nullopt when inconsistent.
/// Uses the normal equations x = Aᵀ (A_r A_rᵀ)⁻¹ b_r on a maximal set of
/// independent rows.
inline std::optional<std::vector<Rational>> solve_min_norm(
    const RationalMatrix& a, const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("rhs size mismatch");
  RationalMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  // Independent rows of A via elimination on Aᵀ.
  RationalMatrix at = a.transpose();
  auto row_pivots = detail::rref(at);
  auto aug_pivots = detail::rref(aug);
  for (auto p : aug_pivots)
    if (p == a.cols()) return std::nullopt;

  const std::size_t k = row_pivots.size();
  RationalMatrix ar(k, a.cols());
  std::vector<Rational> br(k);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < a.cols(); ++j) ar(r, j) = a(row_pivots[r], j);
    br[r] = b[row_pivots[r]];
  }
  RationalMatrix gram = ar * ar.transpose();
  RationalMatrix sys(k, k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) sys(i, j) = gram(i, j);
    sys(i, k) = br[i];
  }
  detail::rref(sys);
  std::vector<Rational> x(a.cols());
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t j = 0; j < a.cols(); ++j) x[j] += ar(r, j) * sys(r, k);
  return x;
}

}  // namespace ncsos
