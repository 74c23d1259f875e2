#pragma once

// Polynomials in the real free *-algebra R<X, X*>. BasicPoly<Rational> is the
// exact type used everywhere a decision must be made without tolerance;
// BasicPoly<double> carries numerically recovered squares.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ncsos/rational.hpp"
#include "ncsos/word.hpp"

namespace ncsos {

namespace detail {
inline bool is_zero_coeff(const Rational& c) { return sgn(c) == 0; }
inline bool is_zero_coeff(double c) { return c == 0.0; }
inline double to_double(const Rational& c) { return c.get_d(); }
inline double to_double(double c) { return c; }
}  // namespace detail

template <class Coeff>
class BasicPoly {
 public:
  using Terms = std::map<Word, Coeff>;

  /// degree() of the zero polynomial.
  static constexpr int kZeroDegree = -1;

  explicit BasicPoly(Alphabet a = Alphabet{1}) : alphabet_(a) {}

  static BasicPoly constant(Alphabet a, const Coeff& c) {
    return monomial(a, Word{}, c);
  }
  static BasicPoly monomial(Alphabet a, const Word& w, const Coeff& c = Coeff(1)) {
    if (!w.valid_for(a)) throw std::out_of_range("word uses letters outside the alphabet");
    BasicPoly p(a);
    p.add_term(w, c);
    return p;
  }
  /// X_j, or X_j* when starred.
  static BasicPoly variable(Alphabet a, int j, bool starred = false) {
    if (j < 1 || j > a.n) throw std::out_of_range("variable index outside the alphabet");
    return monomial(a, Word{starred ? j + a.n : j});
  }

  Alphabet alphabet() const { return alphabet_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Coeff coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  int degree() const {
    return terms_.empty() ? kZeroDegree : static_cast<int>(terms_.rbegin()->first.degree());
  }

  /// Graded-lex largest word with a nonzero coefficient.
  std::optional<Word> leading_word() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.rbegin()->first;
  }

  void add_term(const Word& w, const Coeff& c) {
    if (detail::is_zero_coeff(c)) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (detail::is_zero_coeff(it->second)) terms_.erase(it);
    }
  }

  BasicPoly& operator+=(const BasicPoly& q) {
    check_alphabet(q);
    for (const auto& [w, c] : q.terms_) add_term(w, c);
    return *this;
  }
  BasicPoly& operator-=(const BasicPoly& q) {
    check_alphabet(q);
    for (const auto& [w, c] : q.terms_) add_term(w, Coeff(-c));
    return *this;
  }
  BasicPoly& operator*=(const Coeff& s) {
    if (detail::is_zero_coeff(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [w, c] : terms_) c *= s;
    return *this;
  }

  friend BasicPoly operator+(BasicPoly p, const BasicPoly& q) { return p += q; }
  friend BasicPoly operator-(BasicPoly p, const BasicPoly& q) { return p -= q; }
  friend BasicPoly operator-(BasicPoly p) { return p *= Coeff(-1); }
  friend BasicPoly operator*(const Coeff& s, BasicPoly p) { return p *= s; }

  friend BasicPoly operator*(const BasicPoly& p, const BasicPoly& q) {
    p.check_alphabet(q);
    BasicPoly out(p.alphabet_);
    for (const auto& [u, a] : p.terms_)
      for (const auto& [v, b] : q.terms_) out.add_term(u + v, Coeff(a * b));
    return out;
  }

  friend bool operator==(const BasicPoly& p, const BasicPoly& q) {
    return p.alphabet_ == q.alphabet_ && p.terms_ == q.terms_;
  }

 private:
  void check_alphabet(const BasicPoly& q) const {
    if (!(alphabet_ == q.alphabet_))
      throw std::invalid_argument("polynomials over different alphabets");
  }

  Alphabet alphabet_;
  Terms terms_;
};

using NcPoly = BasicPoly<Rational>;
using RealPoly = BasicPoly<double>;

/// c·w ↦ c·w*, termwise.
template <class Coeff>
BasicPoly<Coeff> adjoint(const BasicPoly<Coeff>& p) {
  BasicPoly<Coeff> out(p.alphabet());
  for (const auto& [w, c] : p.terms()) out.add_term(adjoint(w, p.alphabet()), c);
  return out;
}

template <class Coeff>
bool is_symmetric(const BasicPoly<Coeff>& p) {
  return adjoint(p) == p;
}

template <class Coeff>
BasicPoly<Coeff> pow(const BasicPoly<Coeff>& p, unsigned k) {
  auto out = BasicPoly<Coeff>::constant(p.alphabet(), Coeff(1));
  for (unsigned i = 0; i < k; ++i) out = out * p;
  return out;
}

inline NcPoly commutator(const NcPoly& p, const NcPoly& q) { return p * q - q * p; }

/// Exact test of pq = qp.
inline bool commutes(const NcPoly& p, const NcPoly& q) { return commutator(p, q).is_zero(); }

inline RealPoly to_real(const NcPoly& p) {
  RealPoly out(p.alphabet());
  for (const auto& [w, c] : p.terms()) out.add_term(w, c.get_d());
  return out;
}

/// Largest absolute coefficient; 0 for the zero polynomial.
template <class Coeff>
double max_abs_coeff(const BasicPoly<Coeff>& p) {
  double m = 0;
  for (const auto& [w, c] : p.terms()) m = std::max(m, std::abs(detail::to_double(c)));
  return m;
}

/// n real square matrices of a common size k.
class MatrixTuple {
 public:
  explicit MatrixTuple(std::vector<Eigen::MatrixXd> matrices)
      : matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw std::invalid_argument("matrix tuple is empty");
    const auto k = matrices_.front().rows();
    if (k < 1) throw std::invalid_argument("matrices must be at least 1x1");
    for (const auto& m : matrices_)
      if (m.rows() != k || m.cols() != k)
        throw std::invalid_argument("matrix tuple members must be square and equally sized");
  }

  std::size_t count() const { return matrices_.size(); }
  Eigen::Index dim() const { return matrices_.front().rows(); }
  const Eigen::MatrixXd& operator[](std::size_t j) const { return matrices_[j]; }

 private:
  std::vector<Eigen::MatrixXd> matrices_;
};

/// Substitutes M_j for X_j and M_jᵀ for X_j*.
template <class Coeff>
Eigen::MatrixXd evaluate(const BasicPoly<Coeff>& p, const MatrixTuple& m) {
  const Alphabet a = p.alphabet();
  if (m.count() != static_cast<std::size_t>(a.n))
    throw std::invalid_argument("matrix tuple size does not match the alphabet");
  const auto k = m.dim();
  std::vector<Eigen::MatrixXd> letter(a.letters() + 1);
  for (int j = 1; j <= a.n; ++j) {
    letter[j] = m[j - 1];
    letter[j + a.n] = m[j - 1].transpose();
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(k, k);
  for (const auto& [w, c] : p.terms()) {
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(k, k);
    for (Letter l : w.letters()) prod = prod * letter[l];
    out += detail::to_double(c) * prod;
  }
  return out;
}

}  // namespace ncsos
