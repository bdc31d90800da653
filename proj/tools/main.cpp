// Command-line front end: constants tables, verification suites, envelope
// scans and extremal searches over finite-tree martingales.
//
// Exit status: 0 all checks passed, 1 some check failed, 2 input/config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdg/checks.hpp"
#include "bdg/io.hpp"
#include "bdg/scalar_kernels.hpp"
#include "bdg/search.hpp"

namespace {

using bdg::json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::vector<double> parse_grid(const std::string& s) {
  // "lo:hi:step" inclusive of hi up to rounding slop
  double lo, hi, step;
  if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
    throw std::invalid_argument("grid must be lo:hi:step");
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (hi < lo) throw std::invalid_argument("grid bounds are reversed");
  std::vector<double> g;
  for (double p = lo; p <= hi + 0.5 * step; p += step) g.push_back(p);
  return g;
}

void emit(const json& doc, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot open " + out_path);
    out << doc.dump(2) << "\n";
  }
}

json meta(const std::string& command, std::uint64_t seed, const json& params) {
  json m;
  m["version"] = 1;
  m["command"] = command;
  m["seed"] = seed;
  m["params"] = params;
  return m;
}

int cmd_constants(const std::vector<double>& grid, const std::string& out) {
  json rows = json::array();
  for (double p : grid) {
    const bdg::PExponent e = bdg::PExponent::make(p);
    json row;
    row["p"] = bdg::format_double(p);
    row["q"] = bdg::format_double(e.q);
    row["c_p"] = bdg::format_double(e.c_p);
    row["C_p"] = bdg::format_double(e.C_p);
    row["doob"] = bdg::format_double(e.doob);
    if (e.d_p) {
      row["d_p"] = bdg::format_double(*e.d_p);
      row["D_p_est"] = bdg::format_double(
          bdg::estimate_comparability(p, bdg::Side::Upper));
    }
    if (e.D_p) {
      row["D_p"] = bdg::format_double(*e.D_p);
      row["d_p_est"] = bdg::format_double(
          bdg::estimate_comparability(p, bdg::Side::Lower));
    }
    rows.push_back(std::move(row));
  }
  json doc;
  json params;
  params["p_count"] = grid.size();
  doc["meta"] = meta("constants", 0, params);
  doc["results"] = std::move(rows);
  emit(doc, out);
  return kExitPass;
}

int cmd_verify(const std::string& input, const std::string& family, double p,
               int depth, std::uint64_t seed, double tol_identity,
               double tol_ineq, const std::string& out) {
  bdg::AdaptedProcess proc;
  if (!input.empty())
    proc = bdg::load_martingale(input);
  else
    proc = bdg::make_family(family, depth, 2, seed);

  bdg::SuiteConfig cfg;
  cfg.tol_identity = tol_identity;
  cfg.tol_ineq = tol_ineq;
  const bdg::SuiteReport suite = bdg::run_suite(proc, p, cfg);

  json doc;
  json params;
  params["p"] = bdg::format_double(p);
  params["input"] = input;
  params["family"] = family;
  params["depth"] = depth;
  params["tol_identity"] = bdg::format_double(tol_identity);
  params["tol_ineq"] = bdg::format_double(tol_ineq);
  doc["meta"] = meta("verify", seed, params);
  doc["results"] = json::array({bdg::to_json(suite)});
  emit(doc, out);

  for (const auto& c : suite.checks)
    std::cerr << (c.pass ? "[ok]   " : "[FAIL] ") << c.check_id << " ("
              << bdg::to_string(c.status) << ")\n";
  return suite.overall_pass ? kExitPass : kExitFail;
}

int cmd_scan(const std::vector<double>& grid, const std::string& family,
             int depth, std::uint64_t seed, int restarts, std::uint64_t budget,
             const std::string& out, const std::string& csv) {
  const bdg::AdaptedProcess proc = bdg::make_family(family, depth, 2, seed);
  const auto rows = bdg::p_scan(proc, grid, restarts, budget, seed);

  json jrows = json::array();
  bool all_pass = true;
  for (const auto& r : rows) {
    jrows.push_back(bdg::to_json(r));
    all_pass = all_pass && r.pass;
  }
  json doc;
  json params;
  params["family"] = family;
  params["depth"] = depth;
  params["restarts"] = restarts;
  params["budget"] = budget;
  doc["meta"] = meta("scan", seed, params);
  doc["results"] = std::move(jrows);
  emit(doc, out);

  if (!csv.empty()) {
    std::ofstream f(csv);
    if (!f) throw std::invalid_argument("cannot open " + csv);
    f << "p,c_p_pow,observed_min,observed_max,C_p_pow,pass\n";
    for (const auto& r : rows)
      f << bdg::format_double(r.p) << "," << bdg::format_double(r.cp_pow)
        << "," << bdg::format_double(r.min_ratio) << ","
        << bdg::format_double(r.max_ratio) << ","
        << bdg::format_double(r.Cp_pow) << "," << (r.pass ? 1 : 0) << "\n";
  }
  return all_pass ? kExitPass : kExitFail;
}

int cmd_search(double p, const std::string& direction, int depth,
               int branching, int restarts, std::uint64_t budget,
               std::uint64_t seed, const std::string& out,
               const std::string& cert) {
  const bdg::Direction dir = bdg::parse_direction(direction);
  const auto tree = bdg::make_uniform_tree(depth, branching);
  const auto space = bdg::SearchSpace::over(tree);
  const bdg::SearchResult res =
      bdg::multi_restart_search(space, p, dir, restarts, seed, budget);

  json doc;
  json params;
  params["p"] = bdg::format_double(p);
  params["direction"] = direction;
  params["depth"] = depth;
  params["branching"] = branching;
  params["restarts"] = restarts;
  params["budget"] = budget;
  doc["meta"] = meta("search", seed, params);
  doc["results"] = json::array({bdg::to_json(res)});
  emit(doc, out);
  if (!cert.empty()) bdg::save_martingale(res.certificate, cert);

  std::cerr << "best ratio " << bdg::format_double(res.best_ratio) << " after "
            << res.trace.evaluations << " evaluations\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-tree martingale laboratory: Bregman-divergence "
               "identities, square/maximal function inequalities, constant "
               "tables and extremal ratio search"};
  app.require_subcommand(1);

  double p = 0.0;
  std::string p_grid, input, family = "walk", out, csv, cert;
  std::string direction = "minimize";
  int depth = 4, branching = 2, restarts = 100;
  std::uint64_t budget = 5000, seed = 1;
  double tol_identity = 1e-9, tol_ineq = 1e-12;

  auto* c_const = app.add_subcommand("constants", "Tabulate derived constants");
  c_const->add_option("--p", p, "single exponent p > 1");
  c_const->add_option("--p-grid", p_grid, "grid lo:hi:step");
  c_const->add_option("--out", out, "report path (stdout if omitted)");

  auto* c_verify =
      app.add_subcommand("verify", "Run the full check suite on a martingale");
  c_verify->add_option("--p", p, "exponent p > 1")->required();
  c_verify->add_option("--input", input, "martingale file path");
  c_verify->add_option("--family", family, "generator spec");
  c_verify->add_option("--depth", depth, "generator depth");
  c_verify->add_option("--seed", seed, "generator seed");
  c_verify->add_option("--tol-identity", tol_identity, "identity tolerance");
  c_verify->add_option("--tol-ineq", tol_ineq, "inequality slack");
  c_verify->add_option("--out", out, "report path (stdout if omitted)");

  auto* c_scan = app.add_subcommand("scan", "Envelope scan over a p grid");
  c_scan->add_option("--p-grid", p_grid, "grid lo:hi:step")->required();
  c_scan->add_option("--family", family, "generator spec");
  c_scan->add_option("--depth", depth, "generator depth");
  c_scan->add_option("--seed", seed, "seed");
  c_scan->add_option("--restarts", restarts, "search restarts per p")
      ->default_val(5);
  c_scan->add_option("--budget", budget, "evaluations per restart")
      ->default_val(400);
  c_scan->add_option("--out", out, "report path");
  c_scan->add_option("--csv", csv, "flat CSV path");

  auto* c_search =
      app.add_subcommand("search", "Extremal ratio search on a uniform tree");
  c_search->add_option("--p", p, "exponent p > 1")->required();
  c_search->add_option("--direction", direction, "minimize|maximize");
  c_search->add_option("--depth", depth, "tree depth");
  c_search->add_option("--branching", branching, "children per node");
  c_search->add_option("--restarts", restarts, "restart count");
  c_search->add_option("--budget", budget, "evaluations per restart");
  c_search->add_option("--seed", seed, "restart seed");
  c_search->add_option("--out", out, "report path");
  c_search->add_option("--cert", cert,
                       "write the certificate martingale file here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitError;
  }

  try {
    if (c_const->parsed()) {
      std::vector<double> grid;
      if (!p_grid.empty())
        grid = parse_grid(p_grid);
      else if (p > 0.0)
        grid = {p};
      else
        throw std::invalid_argument("constants needs --p or --p-grid");
      for (double g : grid)
        if (!(g > 1.0))
          throw std::invalid_argument("all exponents must exceed 1");
      return cmd_constants(grid, out);
    }
    if (c_verify->parsed()) {
      if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
      return cmd_verify(input, family, p, depth, seed, tol_identity, tol_ineq,
                        out);
    }
    if (c_scan->parsed()) {
      const auto grid = parse_grid(p_grid);
      for (double g : grid)
        if (!(g > 1.0))
          throw std::invalid_argument("grid bounds must exceed 1");
      return cmd_scan(grid, family, depth, seed, restarts, budget, out, csv);
    }
    if (c_search->parsed()) {
      if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
      return cmd_search(p, direction, depth, branching, restarts, budget, seed,
                        out, cert);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const bdg::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
