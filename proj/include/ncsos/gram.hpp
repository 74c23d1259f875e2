#pragma once

// Gram-matrix representations V*MV = p of a symmetric polynomial p.
//
// The unknowns are the upper-triangle entries of a symmetric M indexed by the
// monomial basis V. Entry (i, j) contributes to exactly one coefficient
// constraint, the one for the word v_i* v_j, and (for i < j) symmetrically to
// the word v_j* v_i = (v_i* v_j)*. Grouping the unknowns by the orbit {w, w*}
// therefore splits the constraint system into independent single-row blocks,
// which is what makes the representative and the kernel cheap to write down.

#include <Eigen/Dense>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ncsos/ncpoly.hpp"
#include "ncsos/rational.hpp"
#include "ncsos/word.hpp"

namespace ncsos {

struct NotSymmetricError : std::invalid_argument {
  NotSymmetricError() : std::invalid_argument("polynomial is not symmetric (p* != p)") {}
};

struct GramInfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The tautological vector V: all words of degree <= D in graded-lex order.
class MonomialBasis {
 public:
  MonomialBasis(Alphabet a, std::size_t degree)
      : alphabet_(a), degree_(degree), words_(words_up_to(a, degree)) {
    for (std::size_t i = 0; i < words_.size(); ++i) index_.emplace(words_[i], i);
  }

  Alphabet alphabet() const { return alphabet_; }
  std::size_t degree() const { return degree_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<Word>& words() const { return words_; }
  const Word& operator[](std::size_t i) const { return words_[i]; }

  std::optional<std::size_t> index_of(const Word& w) const {
    auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Number of degree-D words, (2n)^D.
  std::size_t top_size() const {
    std::size_t s = 1;
    for (std::size_t d = 0; d < degree_; ++d) s *= static_cast<std::size_t>(alphabet_.letters());
    return s;
  }
  std::size_t top_offset() const { return size() - top_size(); }

 private:
  Alphabet alphabet_;
  std::size_t degree_;
  std::vector<Word> words_;
  std::map<Word, std::size_t> index_;
};

/// Upper-triangle position, row <= col.
struct GramCell {
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const GramCell&, const GramCell&) = default;
};

/// One coefficient constraint sum_c weight_c * M[cell_c] = target for the
/// word orbit {word, word*}; `word` is the graded-lex smaller member.
struct WordOrbit {
  Word word;
  std::vector<GramCell> cells;
  std::vector<int> weights;
  Rational target;
};

/// Symmetric matrix stored as its nonzero upper-triangle entries.
class SparseSymmetric {
 public:
  struct Entry {
    GramCell cell;
    Rational value;
  };

  explicit SparseSymmetric(std::size_t dim) : dim_(dim) {}

  void add(GramCell cell, Rational value) { entries_.push_back({cell, std::move(value)}); }
  std::size_t dim() const { return dim_; }
  const std::vector<Entry>& entries() const { return entries_; }

  RationalMatrix dense() const {
    RationalMatrix m(dim_, dim_);
    for (const auto& e : entries_) {
      m(e.cell.row, e.cell.col) += e.value;
      if (e.cell.row != e.cell.col) m(e.cell.col, e.cell.row) += e.value;
    }
    return m;
  }

  Eigen::MatrixXd to_eigen() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& e : entries_) {
      const auto r = static_cast<Eigen::Index>(e.cell.row);
      const auto c = static_cast<Eigen::Index>(e.cell.col);
      m(r, c) += e.value.get_d();
      if (r != c) m(c, r) += e.value.get_d();
    }
    return m;
  }

 private:
  std::size_t dim_;
  std::vector<Entry> entries_;
};

/// The affine space {M symmetric : V*MV = p} = representative + span(kernel).
class GramSpace {
 public:
  GramSpace(MonomialBasis basis, NcPoly target, std::vector<WordOrbit> orbits)
      : basis_(std::move(basis)), target_(std::move(target)), orbits_(std::move(orbits)) {
    build_representative();
  }

  const MonomialBasis& basis() const { return basis_; }
  const NcPoly& target() const { return target_; }
  const std::vector<WordOrbit>& orbits() const { return orbits_; }

  /// Minimum-Frobenius-norm element M0.
  const RationalMatrix& representative() const { return representative_; }

  std::size_t kernel_dimension() const {
    std::size_t dim = 0;
    for (const auto& o : orbits_) dim += o.cells.size() - 1;
    return dim;
  }

  /// Basis of {A = Aᵀ : V*AV = 0}: for each orbit with cells c_0..c_k the
  /// vectors w_r e_{c_0} - w_0 e_{c_r}.
  std::vector<SparseSymmetric> kernel_basis() const {
    std::vector<SparseSymmetric> out;
    out.reserve(kernel_dimension());
    for (const auto& o : orbits_) {
      for (std::size_t r = 1; r < o.cells.size(); ++r) {
        SparseSymmetric a(basis_.size());
        a.add(o.cells[0], Rational(o.weights[r]));
        a.add(o.cells[r], Rational(-o.weights[0]));
        out.push_back(std::move(a));
      }
    }
    return out;
  }

 private:
  // Frobenius weight of an upper-triangle unknown: off-diagonal entries occur twice.
  static int frobenius_weight(const GramCell& c) { return c.row == c.col ? 1 : 2; }

  void build_representative() {
    const std::size_t m = basis_.size();
    representative_ = RationalMatrix(m, m);
    for (const auto& o : orbits_) {
      if (sgn(o.target) == 0) continue;
      // Per-orbit normal equation: minimize sum f_c x_c^2 s.t. sum w_c x_c = b
      // gives x_c = b (w_c / f_c) / sum (w^2 / f).
      Rational denom = 0;
      for (std::size_t k = 0; k < o.cells.size(); ++k)
        denom += Rational(o.weights[k] * o.weights[k], frobenius_weight(o.cells[k]));
      for (std::size_t k = 0; k < o.cells.size(); ++k) {
        Rational x = o.target * Rational(o.weights[k], frobenius_weight(o.cells[k])) / denom;
        x.canonicalize();
        const auto& c = o.cells[k];
        representative_(c.row, c.col) = x;
        representative_(c.col, c.row) = x;
      }
    }
  }

  MonomialBasis basis_;
  NcPoly target_;
  std::vector<WordOrbit> orbits_;
  RationalMatrix representative_;
};

/// ceil(deg(p) / 2); 0 for constants and the zero polynomial.
inline std::size_t default_gram_degree(const NcPoly& p) {
  const int deg = p.degree();
  return deg <= 0 ? 0 : static_cast<std::size_t>((deg + 1) / 2);
}

/// Groups the upper-triangle unknowns of a Gram matrix over `basis` by word
/// orbit; targets are left zero.
inline std::vector<WordOrbit> gram_orbits(const MonomialBasis& basis) {
  const Alphabet a = basis.alphabet();
  std::map<Word, WordOrbit> by_word;
  std::vector<Word> starred;
  starred.reserve(basis.size());
  for (const auto& w : basis.words()) starred.push_back(adjoint(w, a));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      Word w = starred[i] + basis[j];
      Word wa = adjoint(w, a);
      const bool self_adjoint = w == wa;
      Word key = wa < w ? std::move(wa) : std::move(w);
      auto& orbit = by_word[key];
      if (orbit.cells.empty()) orbit.word = key;
      orbit.cells.push_back({i, j});
      orbit.weights.push_back(i != j && self_adjoint ? 2 : 1);
    }
  }
  std::vector<WordOrbit> out;
  out.reserve(by_word.size());
  for (auto& [w, o] : by_word) out.push_back(std::move(o));
  return out;
}

/// Builds the Gram space of a symmetric p. `degree` may raise the basis degree
/// above ceil(deg(p)/2); a lower value cannot represent p.
inline GramSpace build_gram_space(const NcPoly& p, std::optional<std::size_t> degree = {}) {
  if (!is_symmetric(p)) throw NotSymmetricError();
  const std::size_t needed = default_gram_degree(p);
  const std::size_t d = degree.value_or(needed);
  if (d < needed)
    throw GramInfeasibleError("basis degree " + std::to_string(d) +
                              " cannot represent a polynomial of degree " +
                              std::to_string(p.degree()));
  MonomialBasis basis(p.alphabet(), d);
  auto orbits = gram_orbits(basis);
  std::map<Word, std::size_t> where;
  for (std::size_t k = 0; k < orbits.size(); ++k) where.emplace(orbits[k].word, k);
  for (const auto& [w, c] : p.terms()) {
    Word wa = adjoint(w, p.alphabet());
    const Word& key = wa < w ? wa : w;
    auto it = where.find(key);
    if (it == where.end())
      throw GramInfeasibleError("word " + to_string(w, p.alphabet()) +
                                " is not reachable from the monomial basis");
    orbits[it->second].target = p.coeff(key);
  }
  return GramSpace(std::move(basis), p, std::move(orbits));
}

/// V*MV for an exact Gram matrix.
inline NcPoly gram_polynomial(const MonomialBasis& basis, const RationalMatrix& m) {
  const Alphabet a = basis.alphabet();
  NcPoly out(a);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Word left = adjoint(basis[i], a);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (sgn(m(i, j)) != 0) out.add_term(left + basis[j], m(i, j));
  }
  return out;
}

/// V*MV for a floating-point Gram matrix.
inline RealPoly gram_polynomial(const MonomialBasis& basis, const Eigen::MatrixXd& m) {
  const Alphabet a = basis.alphabet();
  RealPoly out(a);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Word left = adjoint(basis[i], a);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) out.add_term(left + basis[j], v);
    }
  }
  return out;
}

inline Eigen::MatrixXd to_eigen(const RationalMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
  return out;
}

/// Lower-right (2n)^D x (2n)^D block of the representative. Every kernel
/// element vanishes there, so the block is the same for all of the space.
inline RationalMatrix top_block(const GramSpace& g) {
  const auto& b = g.basis();
  return g.representative().block(b.top_offset(), b.top_offset(), b.top_size(), b.top_size());
}

/// Exact rank of the top block: a lower bound on rank over the whole space.
inline std::size_t rank_lower_bound(const GramSpace& g) { return rank(top_block(g)); }

struct RankCertificate {
  std::size_t lower = 0;
  std::optional<std::size_t> upper;  // nullopt when no PSD Gram matrix was found
  bool certified = false;

  static RankCertificate make(std::size_t lower, std::optional<std::size_t> upper) {
    return {lower, upper, upper.has_value() && *upper == lower};
  }
};

}  // namespace ncsos
