// ncsos: command-line front end.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 not a sum of squares,
// 3 a rank bound failed, 4 the numerical solver gave up.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ncsos/gram.hpp"
#include "ncsos/json_io.hpp"
#include "ncsos/ncpoly.hpp"
#include "ncsos/parser.hpp"
#include "ncsos/sos.hpp"
#include "ncsos/theorems.hpp"

namespace {

using Json = nlohmann::json;
using namespace ncsos;

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kBoundFailed = 3, kSolverFailure = 4 };

std::string read_expr(const std::string& arg) {
  if (arg != "-") return arg;
  return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

std::optional<int> alphabet_flag(int n) { return n > 0 ? std::optional<int>(n) : std::nullopt; }

std::string format_real(const RealPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  char buf[64];
  for (const auto& [w, c] : p.terms()) {
    std::snprintf(buf, sizeof buf, "%.10g", first ? c : std::abs(c));
    if (!first) out += c < 0 ? " - " : " + ";
    out += buf;
    if (!w.empty()) out += "*" + to_string(w, p.alphabet());
    first = false;
  }
  return out;
}

void print_pretty(const SosOutcome& o) {
  std::cout << "status: " << to_string(o.status) << "\n";
  if (o.decomposition) {
    const auto& d = *o.decomposition;
    std::cout << "squares: " << d.squares.size() << "\n";
    for (std::size_t i = 0; i < d.squares.size(); ++i)
      std::cout << "  f" << i + 1 << " = " << format_real(d.squares[i]) << "\n";
    std::cout << "reconstruction error: " << d.reconstruction_error << "\n";
  }
  std::cout << "rank: lower " << o.certificate.lower << ", upper ";
  if (o.certificate.upper)
    std::cout << *o.certificate.upper;
  else
    std::cout << "none";
  std::cout << (o.certificate.certified ? ", certified" : "") << "\n";
}

int exit_for(SosStatus s) {
  switch (s) {
    case SosStatus::Decomposed: return kOk;
    case SosStatus::Infeasible: return kInfeasible;
    case SosStatus::SolverFailure: return kSolverFailure;
  }
  return kSolverFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sum-of-squares analysis in the free *-algebra"};
  app.require_subcommand(1);
  int code = kOk;

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Normalize a polynomial and list its terms");
  std::string parse_expr;
  int parse_n = 0;
  parse_cmd->add_option("expr", parse_expr, "Polynomial, or - for stdin")->required();
  parse_cmd->add_option("--n", parse_n, "Number of variables (default: largest index)");
  parse_cmd->callback([&] {
    std::cout << json::poly(parse_poly(read_expr(parse_expr), alphabet_flag(parse_n))).dump() << "\n";
  });

  // gram
  auto* gram_cmd = app.add_subcommand("gram", "Gram space: representative, kernel, top block");
  std::string gram_expr;
  int gram_n = 0;
  std::optional<std::size_t> gram_degree;
  gram_cmd->add_option("expr", gram_expr)->required();
  gram_cmd->add_option("--n", gram_n);
  gram_cmd->add_option("--degree", gram_degree, "Monomial basis degree");
  gram_cmd->callback([&] {
    const NcPoly p = parse_poly(read_expr(gram_expr), alphabet_flag(gram_n));
    std::cout << json::gram_space(build_gram_space(p, gram_degree)).dump() << "\n";
  });

  // sos
  auto* sos_cmd = app.add_subcommand("sos", "Sum-of-squares decomposition");
  std::string sos_expr, dump_path;
  int sos_n = 0;
  double tol = SosOptions{}.rank_tol;
  bool pretty = false;
  sos_cmd->add_option("expr", sos_expr)->required();
  sos_cmd->add_option("--n", sos_n);
  sos_cmd->add_option("--tol", tol, "Relative eigenvalue threshold for numerical rank")
      ->check(CLI::PositiveNumber);
  auto* json_flag = sos_cmd->add_flag("--json", "JSON output (default)");
  sos_cmd->add_flag("--pretty", pretty, "Human-readable output")->excludes(json_flag);
  sos_cmd->add_option("--dump-sdp", dump_path, "Write the trace SDP and its solution to FILE");
  sos_cmd->callback([&] {
    const NcPoly p = parse_poly(read_expr(sos_expr), alphabet_flag(sos_n));
    SosOptions opt;
    opt.rank_tol = tol;
    const SosOutcome o = sos_decompose(p, opt);
    if (!dump_path.empty()) {
      const GramSpace g = build_gram_space(p);
      const GramSupport sup = prune_gram_support(g);
      Json dump = {{"support", sup.active}};
      if (!sup.infeasible && sup.count() > 0) dump["problem"] = json::sdp_problem(trace_problem(g, &sup));
      dump["solution"] = json::sdp_solution(o.sdp);
      std::ofstream(dump_path) << dump.dump(1) << "\n";
    }
    if (pretty)
      print_pretty(o);
    else
      std::cout << json::sos_outcome(o).dump() << "\n";
    code = exit_for(o.status);
  });

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Certified rank bounds");
  std::string rank_expr;
  int rank_n = 0;
  rank_cmd->add_option("expr", rank_expr)->required();
  rank_cmd->add_option("--n", rank_n);
  rank_cmd->callback([&] {
    const SosOutcome o = sos_decompose(parse_poly(read_expr(rank_expr), alphabet_flag(rank_n)));
    std::cout << json::certificate(o.certificate).dump() << "\n";
    code = exit_for(o.status);
  });

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate on a tuple of real matrices");
  std::string eval_expr, matrices_path;
  int eval_n = 0;
  eval_cmd->add_option("expr", eval_expr)->required();
  eval_cmd->add_option("--matrices", matrices_path, "JSON file: array of n square matrices")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--n", eval_n);
  eval_cmd->callback([&] {
    std::ifstream in(matrices_path);
    const MatrixTuple m = json::matrix_tuple(nlohmann::json::parse(in));
    const int n = eval_n > 0 ? eval_n : static_cast<int>(m.count());
    const NcPoly p = parse_poly(read_expr(eval_expr), n);
    const Eigen::MatrixXd v = evaluate(p, m);
    const bool sym =
        (v - v.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
    Json out = {{"k", m.dim()}, {"value", json::matrix(v)}, {"symmetric", sym}};
    out["min_eigenvalue"] = sym ? Json(min_eigenvalue(0.5 * (v + v.transpose()))) : Json(nullptr);
    std::cout << out.dump() << "\n";
  });

  // verify-bound
  auto* vb_cmd = app.add_subcommand("verify-bound", "Check the S-family rank lower bounds");
  std::string family, q_expr;
  int vb_n = 1, vb_d = 1, vb_k = 0, random_count = 0, max_q_degree = 2;
  std::uint64_t seed = 1;
  std::size_t max_basis = BoundOptions{}.max_basis;
  vb_cmd->add_option("--family", family)->required()->check(CLI::IsMember({"qsq", "qqs", "power"}));
  vb_cmd->add_option("--n", vb_n)->check(CLI::PositiveNumber);
  vb_cmd->add_option("--d", vb_d)->check(CLI::PositiveNumber);
  auto* q_opt = vb_cmd->add_option("--q", q_expr, "q, or - for stdin");
  auto* k_opt = vb_cmd->add_option("--k", vb_k, "Odd power (family power)");
  auto* rand_opt = vb_cmd->add_option("--random", random_count, "Number of random q")
                       ->check(CLI::PositiveNumber);
  vb_cmd->add_option("--seed", seed);
  vb_cmd->add_option("--max-q-degree", max_q_degree, "Degree bound for random q")
      ->check(CLI::NonNegativeNumber);
  vb_cmd->add_option("--max-basis", max_basis, "Size cap on the monomial basis");
  q_opt->excludes(rand_opt)->excludes(k_opt);
  rand_opt->excludes(k_opt);
  vb_cmd->callback([&] {
    BoundOptions opt;
    opt.max_basis = max_basis;
    std::vector<std::variant<BoundReport, NotApplicable>> results;
    if (family == "power") {
      if (!*k_opt) throw CLI::ValidationError("--family power needs --k");
      results.emplace_back(verify_power_bound(vb_k, vb_n, vb_d, opt));
    } else {
      std::vector<NcPoly> qs;
      if (*q_opt) {
        qs.push_back(parse_poly(read_expr(q_expr), vb_n));
      } else if (*rand_opt) {
        std::mt19937_64 rng(seed);
        for (int i = 0; i < random_count; ++i)
          qs.push_back(random_q(Alphabet(vb_n), static_cast<std::size_t>(max_q_degree), rng));
      } else {
        throw CLI::ValidationError("--family " + family + " needs --q or --random");
      }
      for (const auto& q : qs) {
        if (q.is_zero()) throw std::invalid_argument("q must be nonzero");
        if (family == "qsq")
          results.emplace_back(verify_qsq_bound(q, vb_d, opt));
        else
          results.push_back(verify_qqs_bound(q, vb_d, opt));
      }
    }
    std::size_t applicable = 0, satisfied = 0;
    for (const auto& r : results) {
      if (const auto* rep = std::get_if<BoundReport>(&r)) {
        ++applicable;
        satisfied += rep->satisfied ? 1 : 0;
        std::cout << json::bound_report(*rep).dump() << "\n";
      } else {
        std::cout << json::not_applicable(std::get<NotApplicable>(r)).dump() << "\n";
      }
    }
    std::cout << (satisfied == applicable ? "PASS " : "FAIL ") << satisfied << "/" << applicable << "\n";
    if (satisfied != applicable) code = kBoundFailed;
  });

  // commutes
  auto* comm_cmd = app.add_subcommand("commutes", "Exact test of pq = qp");
  std::string expr1, expr2;
  int comm_n = 0;
  comm_cmd->add_option("p", expr1)->required();
  comm_cmd->add_option("q", expr2)->required();
  comm_cmd->add_option("--n", comm_n);
  comm_cmd->callback([&] {
    const std::string t1 = read_expr(expr1), t2 = read_expr(expr2);
    int n = comm_n;
    if (n <= 0) n = std::max(parse_poly(t1).alphabet().n, parse_poly(t2).alphabet().n);
    std::cout << nlohmann::json{{"commutes", commutes(parse_poly(t1, n), parse_poly(t2, n))}}.dump()
              << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return kUsage;
  } catch (const GramInfeasibleError& e) {
    std::cerr << e.what() << "\n";
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return code;
}
