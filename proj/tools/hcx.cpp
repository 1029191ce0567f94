#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hcx/hcx.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) out.push_back(' ');
    out += argv[i];
  }
  return out;
}

struct Envelope {
  std::string command;
  std::string digest = hcx::fnv1a64_digest("");
  std::uint64_t seed = 0;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(nlohmann::json result) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << hcx::make_run_report(command, digest, seed, seconds, std::move(result)).dump(2)
              << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional-infimum calculus and hidden-convexity tools"};
  app.require_subcommand(1);

  std::string problem_path;
  std::uint64_t seed = 0;

  auto* detect_cmd =
      app.add_subcommand("detect", "report the sign pattern or a sampled nonconvexity witness");
  detect_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  detect_cmd->add_option("--seed", seed, "sampling seed");
  std::size_t samples = 50000;
  detect_cmd->add_option("--samples", samples, "certificate sample budget");

  auto* solve_cmd =
      app.add_subcommand("solve", "minimize the quadratic over the set of squares");
  solve_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  solve_cmd->add_option("--seed", seed, "multistart seed");
  hcx::SolveParams solve_params;
  solve_cmd->add_option("--tolerance", solve_params.tolerance, "declared solution tolerance");
  solve_cmd->add_option("--max-iter", solve_params.max_iterations,
                        "subgradient steps per start and stage");
  solve_cmd->add_option("--multistarts", solve_params.multistarts, "number of starting points");

  auto* oracle_cmd =
      app.add_subcommand("oracle", "exhaustive grid reference value for a problem file");
  oracle_cmd->add_option("problem", problem_path, "problem JSON file")->required();
  std::size_t resolution = 0;
  oracle_cmd->add_option("--resolution", resolution, "grid points per axis");
  std::vector<double> bound;
  oracle_cmd->add_option("--bound", bound, "per-axis upper bounds of the scanned grid")
      ->expected(-1);

  auto* laws_cmd = app.add_subcommand("lawsuite", "run the conditional-infimum law suite");
  hcx::LawSuiteOptions law_opt;
  laws_cmd->add_option("--seed", seed, "master seed");
  laws_cmd->add_option("--max-set-size", law_opt.max_set_size, "largest random set cardinality");
  laws_cmd->add_option("--cases", law_opt.case_count, "random instances per law");
  bool no_exhaustive = false;
  laws_cmd->add_flag("--no-exhaustive", no_exhaustive, "skip the exhaustive small-instance sweep");
  laws_cmd->add_flag("--mutate-compose", law_opt.mutate_compose)->group("");

  auto* dir_cmd = app.add_subcommand(
      "example-direction",
      "compare the closed form of the punctured-line infimum against a 1-d reference");
  dir_cmd->add_option("--seed", seed, "instance seed");
  std::size_t dir_cases = 100;
  std::size_t dir_rows = 3, dir_cols = 4;
  dir_cmd->add_option("--cases", dir_cases, "number of random instances");
  dir_cmd->add_option("--rows", dir_rows, "rows of the matrix");
  dir_cmd->add_option("--cols", dir_cols, "columns of the matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Envelope env;
  env.command = join_args(argc, argv);
  env.seed = seed;

  try {
    if (detect_cmd->parsed()) {
      const std::string bytes = read_file(problem_path);
      env.digest = hcx::fnv1a64_digest(bytes);
      const hcx::ProblemFile file = hcx::problem_from_json(nlohmann::json::parse(bytes));
      env.emit(hcx::detect_report_to_json(hcx::hidden_convexity_report(file.problem, seed, samples)));
      return 0;
    }

    if (solve_cmd->parsed()) {
      const std::string bytes = read_file(problem_path);
      env.digest = hcx::fnv1a64_digest(bytes);
      const hcx::ProblemFile file = hcx::problem_from_json(nlohmann::json::parse(bytes));
      solve_params.seed = seed;
      const hcx::SolveReport report = hcx::solve(file.problem, solve_params);
      env.emit(hcx::solve_report_to_json(report));
      return report.status == hcx::SolveStatus::signable ? 0 : 3;
    }

    if (oracle_cmd->parsed()) {
      const std::string bytes = read_file(problem_path);
      env.digest = hcx::fnv1a64_digest(bytes);
      const hcx::ProblemFile file = hcx::problem_from_json(nlohmann::json::parse(bytes));
      std::size_t res = resolution;
      if (res == 0 && file.oracle_resolution) res = *file.oracle_resolution;
      if (res == 0)
        throw std::invalid_argument("oracle: resolution required (flag or problem file)");
      std::vector<double> bnd = bound;
      if (bnd.empty() && file.oracle_bound) bnd = *file.oracle_bound;
      if (bnd.empty()) {
        if (auto natural = hcx::natural_grid_bound(file.problem.set))
          bnd = *natural;
        else
          throw std::invalid_argument("oracle: the set has no natural bound; pass --bound");
      }
      env.emit(hcx::oracle_report_to_json(hcx::oracle_grid(file.problem, res, bnd)));
      return 0;
    }

    if (laws_cmd->parsed()) {
      law_opt.seed = seed;
      law_opt.exhaustive = !no_exhaustive;
      const std::vector<hcx::LawReport> reports = hcx::run_law_suite(law_opt);
      const nlohmann::json j = hcx::law_reports_to_json(reports);
      const bool all_passed = j.at("all_passed").get<bool>();
      env.emit(j);
      return all_passed ? 0 : 1;
    }

    if (dir_cmd->parsed()) {
      hcx::detail::Rng g(hcx::detail::mix_seed(seed, 0x646972656374ull));
      double max_err = 0.0;
      nlohmann::json worst;
      for (std::size_t k = 0; k < dir_cases; ++k) {
        std::vector<double> data(dir_rows * dir_cols);
        for (double& v : data) v = g.uniform(-2.0, 2.0);
        const hcx::DenseMatrix a(dir_rows, dir_cols, data);
        std::vector<double> b(dir_rows), x(dir_cols, 0.0);
        for (double& v : b) v = g.uniform(-2.0, 2.0);
        if (k % 4 != 0)  // every fourth instance keeps x = 0 to hit the degenerate branch
          for (double& v : x) v = g.uniform(-2.0, 2.0);
        const double closed = hcx::direction_example_eval(a, b, x);
        const double reference = hcx::direction_oracle_1d(a, b, x);
        const double err = std::abs(closed - reference) / (1.0 + std::abs(reference));
        if (err >= max_err) {
          max_err = err;
          worst = {{"closed_form", closed}, {"reference", reference}, {"x", x}, {"b", b}};
        }
      }
      env.emit(nlohmann::json{{"cases", dir_cases},
                              {"rows", dir_rows},
                              {"cols", dir_cols},
                              {"max_relative_error", max_err},
                              {"worst", worst}});
      return 0;
    }
  } catch (const hcx::InfeasibleSetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const hcx::ProjectionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  }
  return 2;
}
