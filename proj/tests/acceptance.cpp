// Acceptance checks; prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>

#include "ncsos/gram.hpp"
#include "ncsos/parser.hpp"
#include "ncsos/sdp.hpp"
#include "ncsos/sos.hpp"
#include "ncsos/theorems.hpp"
#include "support.hpp"

#ifndef NCSOS_CLI
#error "NCSOS_CLI must name the command-line binary"
#endif

namespace {

using namespace ncsos;
using nlohmann::json;

struct Cli {
  int code = -1;
  std::string out;
};

Cli run_cli(const std::string& args) {
  Cli r;
  FILE* pipe = popen((std::string("'") + NCSOS_CLI + "' " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, double limit_s, const std::function<Result()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0 || secs < limit_s;
  const bool ok = r.pass && in_time;
  if (!ok) ++failures;
  std::ostringstream line;
  line << "AC" << id << " " << (ok ? "PASS" : "FAIL") << " (" << secs << " s";
  if (limit_s > 0) line << ", limit " << limit_s << " s";
  line << ") " << r.detail;
  if (!in_time) line << " [too slow]";
  std::cout << line.str() << std::endl;
}

const char* kPaper = "1 + x1'*x1 + x1*x1'";

Eigen::MatrixXd paper_kernel() {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 1) = m(1, 0) = 1;
  m(0, 2) = m(2, 0) = -1;
  return m;
}

Result paper_example() {
  const Cli c = run_cli(std::string("sos \"") + kPaper + "\"");
  if (c.code != 0) return {false, "exit code " + std::to_string(c.code)};
  const json j = json::parse(c.out);
  const auto squares = j.at("squares").size();
  const double err = j.at("reconstruction_error").get<double>();
  const bool cert = j.at("rank_lower") == 2 && j.at("rank_upper") == 2 && j.at("certified") == true;

  // Trace over the PSD part of the Gram line I + tM, |t| <= 1/sqrt(2).
  const GramSpace g = build_gram_space(parse_poly(kPaper));
  const Eigen::MatrixXd m0 = to_eigen(g.representative());
  const Eigen::MatrixXd k = to_eigen(g.kernel_basis().front().dense());
  const double reach = max_step_to_boundary(m0, k);
  double worst_trace = 0;
  for (int s = -50; s <= 50; ++s) {
    const Eigen::MatrixXd pt = m0 + (reach * s / 50.0) * k;
    if (min_eigenvalue(pt) < -1e-12) return {false, "sampled point left the PSD slice"};
    worst_trace = std::max(worst_trace, std::abs(pt.trace() - 3));
  }
  const SdpSolution sdp = solve(trace_problem(g));
  worst_trace = std::max(worst_trace, std::abs(sdp.objective - 3));

  std::ostringstream d;
  d << "squares=" << squares << " error=" << err << " certificate=(" << j.at("rank_lower") << ","
    << j.at("rank_upper") << "," << j.at("certified") << ") max|trace-3|=" << worst_trace;
  return {squares == 2 && err <= 1e-9 && cert && worst_trace <= 1e-8, d.str()};
}

Result boundary_step() {
  const double t = max_step_to_boundary(Eigen::MatrixXd::Identity(3, 3), paper_kernel());
  const double dev = std::abs(t - 1 / std::sqrt(2.0));
  std::ostringstream d;
  d << "t*=" << t << " |t*-1/sqrt2|=" << dev;
  return {dev <= 1e-10, d.str()};
}

Result zero_block() {
  std::mt19937_64 rng(2024);
  std::size_t matrices = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Alphabet a(1 + static_cast<int>(rng() % 2));
    const GramSpace g = build_gram_space(testing::random_symmetric(a, 4, 6, rng));
    const auto& b = g.basis();
    for (const auto& k : g.kernel_basis()) {
      ++matrices;
      if (!k.dense().block(b.top_offset(), b.top_offset(), b.top_size(), b.top_size()).is_zero())
        return {false, "nonzero top block in trial " + std::to_string(trial)};
    }
  }
  return {true, "100 polynomials, " + std::to_string(matrices) + " kernel matrices"};
}

Result qsq_grid() {
  int ok = 0, total = 0;
  std::ostringstream d;
  for (int n = 1; n <= 2; ++n)
    for (int dd = 1; dd <= 2; ++dd) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + 10 * n + dd));
      std::size_t min_lower = SIZE_MAX;
      for (int i = 0; i < 30; ++i) {
        const BoundReport r = verify_qsq_bound(random_q(Alphabet(n), 2, rng), dd);
        ++total;
        ok += r.satisfied ? 1 : 0;
        min_lower = std::min(min_lower, r.lower);
      }
      d << "[n=" << n << " d=" << dd << " bound=" << theorem_bound(n, dd) << " min lower=" << min_lower
        << "] ";
    }
  d << ok << "/" << total;
  return {ok == total, d.str()};
}

Result powers() {
  std::ostringstream d;
  bool pass = true;
  for (int n = 1; n <= 2; ++n) {
    const BoundReport r = verify_power_bound(3, n, 1);
    pass = pass && r.satisfied && r.lower >= theorem_bound(n, 1);
    d << "S^3 n=" << n << " lower=" << r.lower << " bound=" << r.theorem_bound << "; ";
  }
  const auto na = verify_qqs_bound(parse_poly("x1"), 1);
  const auto* w = std::get_if<NotApplicable>(&na);
  pass = pass && w && sgn(w->witness_coeff) != 0;
  if (w)
    d << "q=x1 not applicable, witness " << to_string(w->witness_coeff) << "*"
      << to_string(w->witness, Alphabet(1));
  return {pass, d.str()};
}

Result round_trip() {
  std::mt19937_64 rng(606);
  int ok = 0;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Alphabet a(1 + static_cast<int>(rng() % 2));
    const std::size_t count = 1 + rng() % 3;
    NcPoly p(a);
    for (std::size_t s = 0; s < count; ++s) {
      const NcPoly f = testing::random_factor(a, rng() % 3, rng);
      p += adjoint(f) * f;
    }
    const SosOutcome o = sos_decompose(p);
    if (o.status == SosStatus::Decomposed && o.decomposition->reconstruction_error <= 1e-6 &&
        o.decomposition->squares.size() <= count)
      ++ok;
    if (o.decomposition) worst = std::max(worst, o.decomposition->reconstruction_error);
  }
  std::ostringstream d;
  d << ok << "/50 decomposed with <= the built number of squares, worst error " << worst;
  return {ok == 50, d.str()};
}

Result non_sos() {
  const Cli c = run_cli("sos \"x1 + x1'\"");
  const bool status_ok = c.code == 2 && json::parse(c.out).at("status") == "infeasible";
  return {status_ok, "exit code " + std::to_string(c.code)};
}

Result homomorphism() {
  std::mt19937_64 rng(808);
  double worst_prod = 0, worst_adj = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 2);
    const Alphabet a(n);
    const NcPoly p = testing::random_poly(a, 3, 6, rng);
    const NcPoly q = testing::random_poly(a, 3, 6, rng);
    const auto t = testing::random_tuple(n, 1 + static_cast<Eigen::Index>(rng() % 4), rng);
    worst_prod = std::max(worst_prod, testing::max_abs(evaluate(p * q, t) - evaluate(p, t) * evaluate(q, t)));
    worst_adj = std::max(worst_adj, testing::max_abs(evaluate(adjoint(p), t) - evaluate(p, t).transpose()));
  }
  std::ostringstream d;
  d << "max product deviation " << worst_prod << ", max adjoint deviation " << worst_adj;
  return {worst_prod <= 1e-10 && worst_adj <= 1e-12, d.str()};
}

}  // namespace

int main() {
  criterion(1, 1.0, paper_example);
  criterion(2, 0, boundary_step);
  criterion(3, 30.0, zero_block);
  criterion(4, 300.0, qsq_grid);
  criterion(5, 30.0, powers);
  criterion(6, 120.0, round_trip);
  criterion(7, 1.0, non_sos);
  criterion(8, 0, homomorphism);
  std::cout << (failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
