#pragma once

// Random instances shared by the test binaries. Engine output is reduced with
// % so the instances are the same on every platform.

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ncsos/ncpoly.hpp"
#include "ncsos/rational.hpp"
#include "ncsos/word.hpp"

namespace ncsos::testing {

inline long small_int(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Up to max_terms terms of degree <= max_degree with coefficients
/// num/den, num in [-5, 5], den in [1, 4].
inline NcPoly random_poly(Alphabet a, std::size_t max_degree, std::size_t max_terms,
                          std::mt19937_64& rng) {
  const auto words = words_up_to(a, max_degree);
  NcPoly p(a);
  const auto terms = static_cast<std::size_t>(small_int(rng, 1, static_cast<long>(max_terms)));
  for (std::size_t t = 0; t < terms; ++t) {
    const auto& w = words[rng() % words.size()];
    p.add_term(w, make_rational(small_int(rng, -5, 5), small_int(rng, 1, 4)));
  }
  return p;
}

/// p + p*, so symmetric with degree <= max_degree.
inline NcPoly random_symmetric(Alphabet a, std::size_t max_degree, std::size_t max_terms,
                               std::mt19937_64& rng) {
  const NcPoly p = random_poly(a, max_degree, max_terms, rng);
  return p + adjoint(p);
}

/// Integer-coefficient f with deg <= max_degree, never zero.
inline NcPoly random_factor(Alphabet a, std::size_t max_degree, std::mt19937_64& rng) {
  const auto words = words_up_to(a, max_degree);
  NcPoly f(a);
  const auto terms = small_int(rng, 1, 4);
  for (long t = 0; t < terms; ++t) f.add_term(words[rng() % words.size()], Rational(small_int(rng, -3, 3)));
  if (f.is_zero()) f = NcPoly::constant(a, Rational(1));
  return f;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = u(rng);
  return m;
}

inline MatrixTuple random_tuple(int n, Eigen::Index k, std::mt19937_64& rng) {
  std::vector<Eigen::MatrixXd> ms;
  for (int j = 0; j < n; ++j) ms.push_back(random_matrix(k, rng));
  return MatrixTuple(std::move(ms));
}

inline double max_abs(const Eigen::MatrixXd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace ncsos::testing
