#include "cergm/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cergm/certificates.hpp"
#include "cergm/errors.hpp"
#include "cergm/oracle.hpp"
#include "cergm/phase_scan.hpp"
#include "cergm/run_config.hpp"
#include "cergm/scalar_phase.hpp"
#include "cergm/solver.hpp"
#include "cergm/two_star.hpp"

namespace cergm::cli {

namespace {

using nlohmann::json;

constexpr double kDefaultKktLimit = 1e-6;

struct Common {
  std::string out_dir = ".";
  std::string json_out;
  std::optional<int> threads;
};

std::filesystem::path resolve(const Common& common, const std::string& name) {
  const std::filesystem::path p(name);
  return p.is_absolute() ? p : std::filesystem::path(common.out_dir) / p;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << text;
}

void emit(const Common& common, const RunConfig& config, const json& result, const std::string& summary) {
  std::cout << summary << '\n';
  if (common.json_out.empty()) return;
  const std::string text = make_output(config, result).dump(2) + "\n";
  if (common.json_out == "-") {
    std::cout << text;
  } else {
    write_file(resolve(common, common.json_out), text);
  }
}

std::string fmt(double x, int precision = 10) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

json certificate_json(const std::optional<Certificate>& c) {
  if (!c) return nullptr;
  return {{"uniform", c->uniform}, {"name", c->name}, {"detail", c->detail}};
}

json solve_json(const SubgraphSpec& H, double epsilon, double beta2, const SolveResult& r) {
  json ties = json::array();
  for (const auto& t : r.ties) ties.push_back(t);
  json diag = {{"iterations", r.diagnostics.iterations},
               {"starts", r.diagnostics.starts},
               {"constraint_residual", r.diagnostics.constraint_residual},
               {"kkt_residual", r.diagnostics.kkt_residual},
               {"restart_spread", r.diagnostics.restart_spread},
               {"audit_psi", r.diagnostics.audit_psi ? json(*r.diagnostics.audit_psi) : json(nullptr)}};
  json out = {{"subgraph", H.name()},
              {"epsilon", epsilon},
              {"beta2", beta2},
              {"psi", r.psi},
              {"uniform_psi", r.uniform_psi},
              {"delta_over_uniform", r.psi - r.uniform_psi},
              {"classification", to_string(r.classification)},
              {"certificate", r.certificate ? json(*r.certificate) : json(nullptr)},
              {"best", r.best},
              {"K_effective", r.best.blocks()},
              {"ties", ties},
              {"diagnostics", diag}};
  if (const auto p = H.star_order(); p && *p >= 2) {
    const auto f = star_degree_residuals(*p, beta2, r.best);
    double worst = 0.0;
    for (double x : f.residuals) worst = std::max(worst, std::abs(x));
    out["degree_equation"] = {{"beta1", f.beta1}, {"degrees", f.degrees}, {"max_abs_residual", worst}};
  }
  return out;
}

void add_solver_options(CLI::App* cmd, SolverConfig& config) {
  cmd->add_option("--blocks", config.max_blocks, "Blocks K of the random starts")->capture_default_str();
  cmd->add_option("--restarts", config.restarts, "Random restarts on top of the structured starts")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "Seed of the random starts")->capture_default_str();
  cmd->add_option("--max-iterations", config.max_iterations, "Ascent iterations per start")->capture_default_str();
  cmd->add_flag("--audit", config.audit, "Run the numerical search even when a uniform certificate applies");
}

json solver_params(const SolverConfig& c) {
  return {{"blocks", c.max_blocks}, {"restarts", c.restarts}, {"seed", c.seed},
          {"max_iterations", c.max_iterations}, {"audit", c.audit}};
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Constrained exponential random graph solver"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML-style key = value file; command-line flags win");
  Common common;
  app.add_option("--out-dir", common.out_dir, "Directory for output files")->capture_default_str();
  app.add_option("--json-out", common.json_out, "Write the JSON result here ('-' for stdout)");
  app.add_option("--threads", common.threads, "Worker threads (default: ERGM_THREADS, else 1)");

  std::function<int()> action;

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the variational problem at one (epsilon, beta2)");
  std::string subgraph = "star:2";
  double epsilon = 0.5, beta2 = 1.0;
  SolverConfig solver;
  double kkt_limit = kDefaultKktLimit;
  std::string grid_csv;
  int grid_resolution = 100;
  solve->add_option("--subgraph", subgraph, "edge | triangle | star:p | JSON {\"v\":..,\"edges\":..}")
      ->capture_default_str();
  solve->add_option("--epsilon", epsilon, "Edge density")->required();
  solve->add_option("--beta2", beta2, "Coupling of t(H, .)")->required();
  add_solver_options(solve, solver);
  solve->add_option("--kkt-limit", kkt_limit, "Exit 3 if the winning start's KKT residual exceeds this")
      ->capture_default_str();
  solve->add_option("--grid-csv", grid_csv, "Also write the optimizer sampled on a grid (x,y,h)");
  solve->add_option("--grid-resolution", grid_resolution, "Grid resolution for --grid-csv")->capture_default_str();
  solve->callback([&]() {
    action = [&]() {
      const auto H = SubgraphSpec::parse(subgraph);
      const auto r = solve_canonical(H, epsilon, beta2, solver);
      RunConfig rc{"solve", {{"subgraph", H}, {"epsilon", epsilon}, {"beta2", beta2}, {"kkt_limit", kkt_limit}},
                   solver.seed, common.out_dir};
      rc.parameters.update(solver_params(solver));
      const std::string cert = r.certificate ? " (" + *r.certificate + ")" : "";
      emit(common, rc, solve_json(H, epsilon, beta2, r),
           "solve " + H.name() + " epsilon=" + fmt(epsilon) + " beta2=" + fmt(beta2) + ": " +
               to_string(r.classification) + cert + " psi=" + fmt(r.psi, 12) + " K=" + std::to_string(r.best.blocks()));
      if (!grid_csv.empty()) {
        std::ostringstream os;
        write_grid_csv(os, r.best, grid_resolution);
        write_file(resolve(common, grid_csv), os.str());
      }
      const bool numerical = r.classification != Classification::kUniformCertified;
      if (numerical && r.diagnostics.starts > 0 && r.diagnostics.kkt_residual > kkt_limit) {
        throw ConvergenceError("best start stopped with KKT residual " + fmt(r.diagnostics.kkt_residual) +
                               " above " + fmt(kkt_limit));
      }
      return 0;
    };
  });

  // phase-scan
  auto* scan = app.add_subcommand("phase-scan", "Classify a grid of (epsilon, beta2) cells");
  std::string scan_subgraph = "star:2", eps_range, beta2_range, csv_path = "phase_scan.csv";
  SolverConfig scan_solver;
  double refine = 1e-3;
  scan->add_option("--subgraph", scan_subgraph, "Subgraph H")->capture_default_str();
  scan->add_option("--eps-range", eps_range, "a:b:n")->required();
  scan->add_option("--beta2-range", beta2_range, "a:b:n")->required();
  scan->add_option("--csv", csv_path, "CSV output file")->capture_default_str();
  scan->add_option("--refine-tol", refine, "Bisection width for transitions")->capture_default_str();
  add_solver_options(scan, scan_solver);
  scan->callback([&]() {
    action = [&]() {
      const auto H = SubgraphSpec::parse(scan_subgraph);
      const auto er = GridRange::parse(eps_range), br = GridRange::parse(beta2_range);
      PhaseScanOptions options{scan_solver, resolve_threads(common.threads), refine};
      const auto r = phase_scan(H, er, br, options);
      std::ostringstream csv;
      write_phase_csv(csv, r);
      write_file(resolve(common, csv_path), csv.str());
      json transitions = json::array();
      for (const auto& t : r.transitions) {
        transitions.push_back({{"epsilon", t.epsilon},
                               {"beta2", t.beta2()},
                               {"beta2_low", t.beta2_low},
                               {"beta2_high", t.beta2_high},
                               {"to_nonuniform", t.to_nonuniform}});
      }
      std::size_t uniform_cells = 0;
      for (const auto& c : r.cells) uniform_cells += is_uniform(c.classification);
      RunConfig rc{"phase-scan",
                   {{"subgraph", H}, {"eps_range", eps_range}, {"beta2_range", beta2_range}, {"csv", csv_path},
                    {"refine_tol", refine}},
                   scan_solver.seed, common.out_dir};
      rc.parameters.update(solver_params(scan_solver));
      json result = {{"cells", r.cells.size()}, {"uniform_cells", uniform_cells}, {"transitions", transitions},
                     {"csv", csv_path}};
      emit(common, rc, result,
           "phase-scan " + H.name() + ": " + std::to_string(r.cells.size()) + " cells, " +
               std::to_string(uniform_cells) + " uniform, " + std::to_string(r.transitions.size()) +
               " transitions -> " + resolve(common, csv_path).string());
      return 0;
    };
  });

  // curve
  auto* curve = app.add_subcommand("curve", "Scalar phase-transition curve and critical point");
  int p = 2;
  std::string curve_range;
  std::string curve_csv;
  curve->add_option("--p", p, "Star order")->capture_default_str();
  curve->add_option("--beta2-range", curve_range, "a:b:n, all above the critical beta2");
  curve->add_option("--csv", curve_csv, "CSV output (beta2,beta1,x_low,x_high)");
  curve->callback([&]() {
    action = [&]() {
      const auto cp = critical_point(p);
      json points = json::array();
      std::ostringstream csv;
      csv << "# beta2: coupling; beta1: curve value; x_low, x_high: the two global maximizers of l\n";
      csv << "beta2,beta1,x_low,x_high\n";
      csv.precision(17);
      if (!curve_range.empty()) {
        for (double b : GridRange::parse(curve_range).values()) {
          const auto pt = transition_curve(b, p);
          points.push_back({{"beta2", b}, {"beta1", pt.beta1}, {"x_low", pt.x_low}, {"x_high", pt.x_high}});
          csv << b << ',' << pt.beta1 << ',' << pt.x_low << ',' << pt.x_high << '\n';
        }
      }
      if (!curve_csv.empty()) write_file(resolve(common, curve_csv), csv.str());
      RunConfig rc{"curve", {{"p", p}, {"beta2_range", curve_range}, {"csv", curve_csv}}, 0, common.out_dir};
      json result = {{"critical_point", {{"beta1", cp.beta1}, {"beta2", cp.beta2}}},
                     {"critical_density", critical_density(p)},
                     {"points", points}};
      emit(common, rc, result,
           "curve p=" + std::to_string(p) + ": critical point (" + fmt(cp.beta1, 12) + ", " + fmt(cp.beta2, 12) +
               "), " + std::to_string(points.size()) + " curve points");
      return 0;
    };
  });

  // stationary
  auto* stationary = app.add_subcommand("stationary", "Two-star stationary graphon at epsilon = 1/2");
  double st_beta2 = 3.0;
  stationary->add_option("--beta2", st_beta2, "Coupling")->required();
  stationary->callback([&]() {
    action = [&]() {
      const auto sp = stationary_graphon(st_beta2);
      const auto sc = saddle_check(st_beta2);
      const Eigen::VectorXd g = degree_profile(sp.graphon);
      RunConfig rc{"stationary", {{"beta2", st_beta2}}, 0, common.out_dir};
      json result = {{"beta2", sp.beta2},
                     {"delta", sp.delta},
                     {"graphon", sp.graphon},
                     {"lagrange_beta1", sp.lagrange_beta1},
                     {"euler_lagrange_residual", sp.euler_lagrange_residual},
                     {"degree_profile", std::vector<double>(g.data(), g.data() + g.size())},
                     {"second_variation",
                      {{"checkerboard", sc.checkerboard_value},
                       {"localized", sc.localized_value},
                       {"verdict", to_string(sc.verdict)}}}};
      emit(common, rc, result,
           "stationary beta2=" + fmt(st_beta2) + ": delta=" + fmt(sp.delta, 12) + " (" + to_string(sc.verdict) + ")");
      return 0;
    };
  });

  // limits
  auto* limits = app.add_subcommand("limits", "Large-beta2 bracket for psi / beta2");
  std::string lim_subgraph = "star:2";
  double lim_eps = 0.3, lim_beta2 = 100.0;
  bool lim_solve = false;
  SolverConfig lim_solver;
  limits->add_option("--subgraph", lim_subgraph, "star:2 or triangle")->capture_default_str();
  limits->add_option("--epsilon", lim_eps, "Edge density")->required();
  limits->add_option("--beta2", lim_beta2, "Coupling")->required();
  limits->add_flag("--solve", lim_solve, "Also run the solver and report psi / beta2");
  add_solver_options(limits, lim_solver);
  limits->callback([&]() {
    action = [&]() {
      const auto H = SubgraphSpec::parse(lim_subgraph);
      const auto b = limit_ratio(H, lim_eps, lim_beta2);
      RunConfig rc{"limits", {{"subgraph", H}, {"epsilon", lim_eps}, {"beta2", lim_beta2}, {"solve", lim_solve}},
                   lim_solver.seed, common.out_dir};
      rc.parameters.update(solver_params(lim_solver));
      json result = {{"lo", b.lo}, {"hi", b.hi}};
      std::string summary = "limits " + H.name() + " epsilon=" + fmt(lim_eps) + " beta2=" + fmt(lim_beta2) + ": [" +
                            fmt(b.lo, 8) + ", " + fmt(b.hi, 8) + "]";
      if (lim_solve) {
        const auto r = solve_canonical(H, lim_eps, lim_beta2, lim_solver);
        const double ratio = r.psi / lim_beta2;
        result["psi"] = r.psi;
        result["ratio"] = ratio;
        result["inside"] = ratio >= b.lo && ratio <= b.hi;
        summary += " psi/beta2=" + fmt(ratio, 10);
      }
      emit(common, rc, result, summary);
      return 0;
    };
  });

  // certify
  auto* cert = app.add_subcommand("certify", "Closed-form uniformity verdict, if any");
  std::string cert_subgraph = "star:2";
  double cert_eps = 0.5, cert_beta2 = 1.0;
  cert->add_option("--subgraph", cert_subgraph, "Subgraph H")->capture_default_str();
  cert->add_option("--epsilon", cert_eps, "Edge density")->required();
  cert->add_option("--beta2", cert_beta2, "Coupling")->required();
  cert->callback([&]() {
    action = [&]() {
      const auto H = SubgraphSpec::parse(cert_subgraph);
      const auto c = certify(H, cert_eps, cert_beta2);
      const auto ve = threshold_ve(H, cert_eps);
      json result = {{"certificate", certificate_json(c)},
                     {"threshold_ve", ve ? json(*ve) : json(nullptr)},
                     {"uniform_psi", uniform_objective(H, cert_eps, cert_beta2)}};
      if (H.star_order() == 2) result["threshold_twostar"] = threshold_twostar(cert_eps);
      RunConfig rc{"certify", {{"subgraph", H}, {"epsilon", cert_eps}, {"beta2", cert_beta2}}, 0, common.out_dir};
      const std::string summary =
          c ? std::string(c->uniform ? "uniform-certified" : "nonuniform-certified") + " (" + c->name + ")"
            : std::string("no certificate");
      emit(common, rc, result, summary);
      return 0;
    };
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Finite-n ground truth");
  oracle->require_subcommand(1);
  auto* enumerate = oracle->add_subcommand("enumerate", "Exact sum over labelled graphs (n <= 7)");
  int en_n = 5, top_k = 5;
  double en_eps = 0.5, en_delta = 0.06, en_beta2 = 0.0;
  std::string en_subgraph = "star:2";
  bool en_reverse = false;
  enumerate->add_option("--n", en_n, "Vertices")->required();
  enumerate->add_option("--epsilon", en_eps, "Window centre (2|E|/n^2)")->required();
  enumerate->add_option("--delta", en_delta, "Window half-width")->required();
  enumerate->add_option("--subgraph", en_subgraph, "Subgraph H")->capture_default_str();
  enumerate->add_option("--beta2", en_beta2, "Coupling")->capture_default_str();
  enumerate->add_option("--top-k", top_k, "Most probable graphs to report")->capture_default_str();
  enumerate->add_flag("--reverse", en_reverse, "Walk graph indices from the top down");
  enumerate->callback([&]() {
    action = [&]() {
      const auto H = SubgraphSpec::parse(en_subgraph);
      EnumerationOptions options{top_k, en_reverse, resolve_threads(common.threads)};
      const auto r = enumerate_psi(en_n, en_eps, en_delta, H, en_beta2, options);
      json top = json::array();
      for (const auto& g : r.top_graphs) top.push_back({{"bits", g.graph.to_bitstring()}, {"probability", g.probability}});
      RunConfig rc{"oracle enumerate",
                   {{"n", en_n}, {"epsilon", en_eps}, {"delta", en_delta}, {"subgraph", H}, {"beta2", en_beta2},
                    {"top_k", top_k}, {"reverse", en_reverse}},
                   0, common.out_dir};
      json result = {{"psi_n_delta", r.psi_n_delta}, {"num_admitted", r.num_admitted}, {"mean_t", r.mean_t},
                     {"top_graphs", top}};
      emit(common, rc, result,
           "oracle enumerate n=" + std::to_string(en_n) + ": psi_n_delta=" + fmt(r.psi_n_delta, 12) + " admitted=" +
               std::to_string(r.num_admitted));
      return 0;
    };
  });
  auto* mcmc = oracle->add_subcommand("mcmc", "Edge-swap Metropolis chain at fixed edge count");
  int mc_n = 30;
  std::int64_t mc_edges = -1, mc_steps = 100000, mc_burn = 10000;
  double mc_eps = -1.0, mc_beta2 = 0.0;
  std::uint64_t mc_seed = 1;
  std::string mc_subgraph = "star:2";
  mcmc->add_option("--n", mc_n, "Vertices")->required();
  auto* edges_opt = mcmc->add_option("--edges", mc_edges, "Edge count");
  auto* eps_opt = mcmc->add_option("--epsilon", mc_eps, "Edge density 2|E|/n^2 (rounded to an edge count)");
  edges_opt->excludes(eps_opt);
  mcmc->add_option("--subgraph", mc_subgraph, "Subgraph H")->capture_default_str();
  mcmc->add_option("--beta2", mc_beta2, "Coupling")->capture_default_str();
  mcmc->add_option("--steps", mc_steps, "Steps after burn-in")->capture_default_str();
  mcmc->add_option("--burn-in", mc_burn, "Burn-in steps")->capture_default_str();
  mcmc->add_option("--seed", mc_seed, "RNG seed")->capture_default_str();
  mcmc->callback([&]() {
    action = [&]() {
      const auto H = SubgraphSpec::parse(mc_subgraph);
      std::int64_t m = mc_edges;
      if (m < 0) {
        if (mc_eps < 0.0) throw DomainError("oracle mcmc: give --edges or --epsilon");
        m = std::llround(mc_eps * mc_n * mc_n / 2.0);
      }
      const auto r = mcmc_sample(mc_n, m, H, mc_beta2, mc_steps, mc_burn, mc_seed);
      RunConfig rc{"oracle mcmc",
                   {{"n", mc_n}, {"edges", m}, {"subgraph", H}, {"beta2", mc_beta2}, {"steps", mc_steps},
                    {"burn_in", mc_burn}},
                   mc_seed, common.out_dir};
      json result = {{"edge_count", r.edge_count},   {"acceptance_rate", r.acceptance_rate},
                     {"mean_t", r.mean_t},           {"standard_error", r.standard_error},
                     {"degree_profile", r.degree_profile}, {"frozen", r.frozen}};
      emit(common, rc, result,
           "oracle mcmc n=" + std::to_string(mc_n) + " edges=" + std::to_string(m) + ": mean_t=" + fmt(r.mean_t, 10) +
               " se=" + fmt(r.standard_error, 3) + " acceptance=" + fmt(r.acceptance_rate, 4) +
               (r.frozen ? " (frozen)" : ""));
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return action ? action() : 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace cergm::cli
