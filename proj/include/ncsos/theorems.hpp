#pragma once

// The polynomial S = sum_{|a| = d} X^{a*} X^a and the exact rank-bound checks
// for the families q*Sq, q*qS and the odd powers S^k.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ncsos/gram.hpp"
#include "ncsos/ncpoly.hpp"
#include "ncsos/word.hpp"

namespace ncsos {

struct SizeCapError : std::length_error {
  using std::length_error::length_error;
};

struct SPolynomial {
  Alphabet alphabet;
  int d = 1;
  NcPoly poly;
};

/// S for n variables and half-degree d. Throws SizeCapError when (2n)^d
/// exceeds `term_cap`.
inline SPolynomial make_s(int n, int d, std::size_t term_cap = 4096) {
  if (d < 1) throw std::invalid_argument("make_s needs d >= 1");
  const Alphabet a(n);
  std::size_t terms = 1;
  for (int k = 0; k < d; ++k) {
    terms *= static_cast<std::size_t>(a.letters());
    if (terms > term_cap)
      throw SizeCapError("S has more than " + std::to_string(term_cap) + " terms");
  }
  NcPoly s(a);
  for (const auto& w : words_of_degree(a, static_cast<std::size_t>(d)))
    s.add_term(adjoint(w, a) + w, Rational(1));
  return {a, d, std::move(s)};
}

enum class BoundFamily { QSQ, QQS, Power };

inline const char* to_string(BoundFamily f) {
  switch (f) {
    case BoundFamily::QSQ: return "qsq";
    case BoundFamily::QQS: return "qqs";
    case BoundFamily::Power: return "power";
  }
  return "?";
}

struct BoundReport {
  BoundFamily family = BoundFamily::QSQ;
  int n = 1;
  int d = 1;
  NcPoly q;
  std::optional<int> k;  // power family only
  std::size_t basis_degree = 0;
  std::size_t lower = 0;
  std::size_t theorem_bound = 0;
  bool satisfied = false;
};

/// q*q and S fail to commute, so q*qS is not symmetric; the leading term of
/// the commutator [q*q, S] is the witness.
struct NotApplicable {
  NcPoly q;
  int d = 1;
  Word witness;
  Rational witness_coeff;
};

struct BoundOptions {
  std::size_t max_basis = 1000;
  std::size_t max_s_terms = 4096;
};

inline std::size_t theorem_bound(int n, int d) {
  std::size_t b = 1;
  for (int k = 0; k < d; ++k) b *= static_cast<std::size_t>(2 * n);
  return b;
}

namespace detail {

inline void check_basis_cap(Alphabet a, std::size_t degree, const BoundOptions& opt) {
  const std::size_t size = count_words_up_to(a, degree);
  if (size > opt.max_basis)
    throw SizeCapError("monomial basis of size " + std::to_string(size) + " exceeds cap " +
                       std::to_string(opt.max_basis));
}

inline BoundReport bound_report(BoundFamily family, const NcPoly& p, const NcPoly& q, int d,
                                std::size_t degree, const BoundOptions& opt) {
  check_basis_cap(p.alphabet(), degree, opt);
  const GramSpace g = build_gram_space(p, degree);
  BoundReport r;
  r.family = family;
  r.n = p.alphabet().n;
  r.d = d;
  r.q = q;
  r.basis_degree = degree;
  r.lower = rank_lower_bound(g);
  r.theorem_bound = theorem_bound(r.n, d);
  r.satisfied = r.lower >= r.theorem_bound;
  return r;
}

}  // namespace detail

/// p = q*Sq over a basis of degree d + deg q.
inline BoundReport verify_qsq_bound(const NcPoly& q, int d, const BoundOptions& opt = {}) {
  if (q.is_zero()) throw std::invalid_argument("q must be nonzero");
  const SPolynomial s = make_s(q.alphabet().n, d, opt.max_s_terms);
  const std::size_t degree = static_cast<std::size_t>(d + q.degree());
  detail::check_basis_cap(q.alphabet(), degree, opt);
  return detail::bound_report(BoundFamily::QSQ, adjoint(q) * s.poly * q, q, d, degree, opt);
}

/// p = q*q S. Symmetric exactly when q*q commutes with S; otherwise the
/// family does not apply.
inline std::variant<BoundReport, NotApplicable> verify_qqs_bound(const NcPoly& q, int d,
                                                                 const BoundOptions& opt = {}) {
  if (q.is_zero()) throw std::invalid_argument("q must be nonzero");
  const SPolynomial s = make_s(q.alphabet().n, d, opt.max_s_terms);
  const NcPoly qq = adjoint(q) * q;
  const NcPoly c = commutator(qq, s.poly);
  if (!c.is_zero()) {
    const Word w = *c.leading_word();
    return NotApplicable{q, d, w, c.coeff(w)};
  }
  const std::size_t degree = static_cast<std::size_t>(d + q.degree());
  detail::check_basis_cap(q.alphabet(), degree, opt);
  return detail::bound_report(BoundFamily::QQS, qq * s.poly, q, d, degree, opt);
}

/// S^k for odd k, read as q*Sq with q = S^((k-1)/2).
inline BoundReport verify_power_bound(int k, int n, int d, const BoundOptions& opt = {}) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("power bound needs odd k >= 1");
  const SPolynomial s = make_s(n, d, opt.max_s_terms);
  const std::size_t degree = static_cast<std::size_t>(d) * static_cast<std::size_t>(k);
  detail::check_basis_cap(s.alphabet, degree, opt);
  const NcPoly q = pow(s.poly, static_cast<unsigned>((k - 1) / 2));
  BoundReport r =
      detail::bound_report(BoundFamily::Power, adjoint(q) * s.poly * q, q, d, degree, opt);
  r.k = k;
  return r;
}

/// Nonzero q with integer coefficients in [-3, 3], at most `max_terms` terms,
/// degree <= max_degree. Uses raw engine output modulo a range so a given seed
/// gives the same q on every platform.
inline NcPoly random_q(Alphabet a, std::size_t max_degree, std::mt19937_64& rng,
                       std::size_t max_terms = 4) {
  const auto words = words_up_to(a, max_degree);
  while (true) {
    NcPoly q(a);
    const std::size_t terms = 1 + static_cast<std::size_t>(rng() % max_terms);
    for (std::size_t t = 0; t < terms; ++t) {
      const auto& w = words[static_cast<std::size_t>(rng() % words.size())];
      q.add_term(w, Rational(static_cast<long>(rng() % 7) - 3));
    }
    if (!q.is_zero()) return q;
  }
}

/// For every degree-d word a, the leading word of X^a q is a followed by the
/// leading word of q, and these are pairwise distinct.
inline bool leading_words_distinct(const NcPoly& q, int d) {
  if (q.is_zero()) return false;
  const Alphabet a = q.alphabet();
  const Word lead = *q.leading_word();
  std::set<Word> seen;
  for (const auto& w : words_of_degree(a, static_cast<std::size_t>(d))) {
    const NcPoly prod = NcPoly::monomial(a, w) * q;
    const auto lw = prod.leading_word();
    if (!lw || *lw != w + lead) return false;
    if (!seen.insert(*lw).second) return false;
  }
  return true;
}

}  // namespace ncsos
