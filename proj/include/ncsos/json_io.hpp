#pragma once

// JSON forms of the library's values (nlohmann::json). Rationals are strings
// such as "-3/4" so that nothing is rounded.

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ncsos/gram.hpp"
#include "ncsos/ncpoly.hpp"
#include "ncsos/parser.hpp"
#include "ncsos/sdp.hpp"
#include "ncsos/sos.hpp"
#include "ncsos/theorems.hpp"

namespace ncsos::json {

using nlohmann::json;

inline json word(const Word& w) { return w.letters(); }

inline json matrix(const RationalMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Infinity has no JSON literal; it is written as null.
inline json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

/// {"n", "text", "terms": [{"coeff": "a/b", "word": [...]}]}
inline json poly(const NcPoly& p) {
  json terms = json::array();
  for (const auto& [w, c] : p.terms()) terms.push_back({{"coeff", to_string(c)}, {"word", word(w)}});
  return {{"n", p.alphabet().n}, {"text", format_poly(p)}, {"terms", std::move(terms)}};
}

/// A floating-point polynomial as a list of {"coeff": float, "word": [...]}.
inline json real_poly(const RealPoly& p) {
  json terms = json::array();
  for (const auto& [w, c] : p.terms()) terms.push_back({{"coeff", c}, {"word", word(w)}});
  return terms;
}

inline json gram_space(const GramSpace& g) {
  const auto& b = g.basis();
  json basis = json::array(), basis_text = json::array(), kernel = json::array();
  for (const auto& w : b.words()) {
    basis.push_back(word(w));
    basis_text.push_back(to_string(w, b.alphabet()));
  }
  for (const auto& k : g.kernel_basis()) kernel.push_back(matrix(k.dense()));
  return {{"degree", b.degree()},
          {"basis", std::move(basis)},
          {"basis_text", std::move(basis_text)},
          {"representative", matrix(g.representative())},
          {"kernel_dimension", g.kernel_dimension()},
          {"kernel", std::move(kernel)},
          {"top_block", matrix(top_block(g))},
          {"rank_lower", rank_lower_bound(g)}};
}

inline json certificate(const RankCertificate& c) {
  return {{"rank_lower", c.lower},
          {"rank_upper", c.upper ? json(*c.upper) : json(nullptr)},
          {"certified", c.certified}};
}

/// {"status", "squares": [[{"coeff", "word"}...]...], "rank_lower",
/// "rank_upper", "certified", "reconstruction_error"}
inline json sos_outcome(const SosOutcome& o) {
  json out = certificate(o.certificate);
  out["status"] = to_string(o.status);
  json squares = json::array();
  if (o.decomposition) {
    for (const auto& f : o.decomposition->squares) squares.push_back(real_poly(f));
    out["reconstruction_error"] = o.decomposition->reconstruction_error;
  } else {
    out["reconstruction_error"] = nullptr;
  }
  out["squares"] = std::move(squares);
  return out;
}

inline json sdp_problem(const SdpProblem& p) {
  json cons = json::array();
  for (const auto& c : p.constraints) {
    json entries = json::array();
    for (const auto& t : c.entries) entries.push_back({t.row(), t.col(), t.value()});
    cons.push_back({{"entries", std::move(entries)}, {"rhs", c.rhs}});
  }
  return {{"dim", p.dim}, {"objective", matrix(p.objective)}, {"constraints", std::move(cons)}};
}

inline json sdp_solution(const SdpSolution& s) {
  return {{"status", to_string(s.status)},
          {"objective", real(s.objective)},
          {"dual_objective", real(s.dual_objective)},
          {"primal_residual", real(s.primal_residual)},
          {"dual_residual", real(s.dual_residual)},
          {"gap", real(s.gap)},
          {"min_eigenvalue", real(s.min_eigenvalue)},
          {"iterations", s.iterations},
          {"x", matrix(s.x)}};
}

inline json bound_report(const BoundReport& r) {
  json out = {{"family", to_string(r.family)},
              {"applicable", true},
              {"n", r.n},
              {"d", r.d},
              {"q", format_poly(r.q)},
              {"basis_degree", r.basis_degree},
              {"lower", r.lower},
              {"theorem_bound", r.theorem_bound},
              {"satisfied", r.satisfied}};
  if (r.k) out["k"] = *r.k;
  return out;
}

inline json not_applicable(const NotApplicable& na) {
  const Alphabet a = na.q.alphabet();
  return {{"family", "qqs"},
          {"applicable", false},
          {"n", a.n},
          {"d", na.d},
          {"q", format_poly(na.q)},
          {"witness",
           {{"word", word(na.witness)},
            {"text", to_string(na.witness, a)},
            {"coeff", to_string(na.witness_coeff)}}}};
}

/// Reads the matrices file: an array of n arrays of k rows of k numbers.
inline MatrixTuple matrix_tuple(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrices: expected a nonempty array");
  std::vector<Eigen::MatrixXd> ms;
  for (const auto& mj : j) {
    if (!mj.is_array() || mj.empty())
      throw std::invalid_argument("matrices: each matrix must be a nonempty array of rows");
    const auto k = static_cast<Eigen::Index>(mj.size());
    Eigen::MatrixXd m(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
      const auto& row = mj[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k)
        throw std::invalid_argument("matrices: each matrix must be square");
      for (Eigen::Index c = 0; c < k; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    ms.push_back(std::move(m));
  }
  return MatrixTuple(std::move(ms));
}

}  // namespace ncsos::json
