// eigbound: eigenvalue perturbation bounds with oracle verification.
//
// Exit status: 0 when every requested verification holds, 1 when any fails
// (the report lists each violation), 2 on bad input.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eigbound/eigbound.hpp"

namespace {

using namespace eigbound;

int emit(const RunReport& rep, const std::string& csv) {
  rep.write_text(std::cout);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write csv file '" + csv + "'");
    rep.write_csv(out);
  }
  return rep.exit_code();
}

std::string echo(int argc, char** argv) {
  std::string s = "eigbound";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue perturbation bounds with oracle verification"};
  app.require_subcommand(1);

  std::string matrix, perturbation, csv;
  std::size_t k = 1;
  bool refined = false, verify = false;

  auto* block = app.add_subcommand("bound-block", "Weyl, quadratic residual and block bounds for A + E");
  std::vector<std::size_t> indices;
  block->add_option("--matrix", matrix, "A")->required()->check(CLI::ExistingFile);
  block->add_option("--perturbation", perturbation, "E")->required()->check(CLI::ExistingFile);
  block->add_option("--k", k, "order of the trailing block")->required();
  block->add_option("--indices", indices, "1-based ascending ranks (default: all)");
  block->add_flag("--refined", refined, "subtract ||E|| + ||E22|| instead of 2||E|| in tau");
  block->add_flag("--verify", verify, "compare with oracle eigenvalues of A + E");
  block->add_option("--csv", csv, "also write the records as CSV");

  auto* wilk = app.add_subcommand("wilkinson", "Close eigenvalue pairs of the Wilkinson matrix W+");
  int n = 10, ell_from = 1, ell_to = 0;
  wilk->add_option("--n", n, "W+ has order 2n+1")->capture_default_str();
  wilk->add_option("--ell-from", ell_from, "first pair counted from the top")->capture_default_str();
  wilk->add_option("--ell-to", ell_to, "last pair (default: n-1)");
  wilk->add_flag("--verify", verify, "accepted for symmetry; pairs are always checked");
  wilk->add_option("--csv", csv, "also write the records as CSV");

  auto* aed = app.add_subcommand("aed", "Early deflation of a trailing window of a tridiagonal matrix");
  AedOptions aopt;
  std::size_t depth = 0;
  double alpha = -1.0;
  std::string constant = "full";
  aed->add_option("--matrix", matrix, "tridiagonal T")->required()->check(CLI::ExistingFile);
  aed->add_option("--k", aopt.k, "window order")->required();
  aed->add_option("--j", depth, "fixed decay depth (default: best depth per eigenvalue)");
  aed->add_option("--alpha", alpha, "eigenvalue drift bound (default: |b_{n-k}|)");
  aed->add_option("--tol", aopt.tol, "deflate when |t_i| <= tol ||T||_2")->capture_default_str();
  aed->add_option("--constant", constant, "leading constant: full (b_{n-k}) or half (b_{n-k}/2)")
      ->check(CLI::IsMember({"full", "half"}))
      ->capture_default_str();
  aed->add_option("--max-sweeps", aopt.max_sweeps, "sweep limit in simulate mode")->capture_default_str();
  aed->add_flag("--simulate", aopt.simulate, "run QR sweeps with early deflation to convergence");
  aed->add_flag("--verify", verify, "compare with oracle eigenvalues of T");
  aed->add_option("--csv", csv, "also write the records as CSV");

  auto* multi = app.add_subcommand("multieig", "First-order expansion at multiple eigenvalues");
  MultiOptions mopt;
  multi->add_option("--matrix", matrix, "A")->required()->check(CLI::ExistingFile);
  multi->add_option("--perturbation", perturbation, "E")->required()->check(CLI::ExistingFile);
  multi->add_option("--eps-grid", mopt.eps_grid, "descending eps values")->capture_default_str();
  multi->add_option("--cluster-tol", mopt.cluster_tol, "cluster diameter relative to ||A||")->capture_default_str();
  multi->add_option("--csv", csv, "also write the records as CSV");

  auto* all = app.add_subcommand("verify-all", "Run every case study against its expected values");
  all->add_option("--csv", csv, "also write the records as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = echo(argc, argv);

  try {
    if (block->parsed()) {
      const MatrixFile a = load_matrix(matrix), e = load_matrix(perturbation);
      return emit(cmd_bound_block(a.dense(), e.dense(), {k, indices, refined, verify}, cmd), csv);
    }
    if (wilk->parsed()) return emit(cmd_wilkinson(n, ell_from, ell_to, cmd), csv);
    if (aed->parsed()) {
      if (depth) aopt.j = depth;
      if (alpha >= 0.0) aopt.alpha = alpha;
      aopt.constant = constant == "half" ? AedConstant::printed_half : AedConstant::full_derivative;
      aopt.verify = verify;
      return emit(cmd_aed(load_matrix(matrix).tridiagonal(), aopt, cmd), csv);
    }
    if (multi->parsed()) {
      const MatrixFile a = load_matrix(matrix), e = load_matrix(perturbation);
      return emit(cmd_multieig(a.dense(), e.dense(), mopt, cmd), csv);
    }
    if (all->parsed()) return emit(cmd_verify_all(cmd), csv);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
