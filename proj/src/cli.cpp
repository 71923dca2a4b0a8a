#include "mta/cli.hpp"

#include "mta/bench.hpp"
#include "mta/error.hpp"
#include "mta/eval.hpp"
#include "mta/icm.hpp"
#include "mta/io.hpp"
#include "mta/likelihood.hpp"
#include "mta/model_selection.hpp"
#include "mta/pca.hpp"
#include "mta/scoring.hpp"
#include "mta/sumprod.hpp"
#include "mta/synth.hpp"
#include "mta/tiling.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>

namespace mta {

namespace {

namespace fs = std::filesystem;

struct GenerateArgs {
  std::size_t size = 0;
  std::size_t tiles = 0;
  double log_var = 0.0;
  std::uint64_t seed = 0;
  double fraction = kDefaultAreaFraction;
  std::string out_dir = ".";
};

struct SolveArgs {
  std::string input;
  std::string method;
  std::string tiles = "auto";
  double sigma = 0.5;
  double tile_mean = 1.0;
  double bg_mean = 0.0;
  std::size_t t_max = 12;
  std::uint64_t seed = 0;
  std::size_t max_iterations = SolverParams{}.max_iterations;
  std::size_t restarts = SolverParams{}.restarts;
  std::string out;
  std::string trace;
};

struct EvalArgs {
  std::string truth;
  std::string pred;
  std::string data;
  double sigma = 0.5;
  double tile_mean = 1.0;
  double bg_mean = 0.0;
  std::string id;
  std::string method;
  std::string append;
};

struct BenchArgs {
  std::string config;
  std::size_t threads = 0;
};

std::string instance_prefix(const GenerateArgs& a) {
  return std::to_string(a.size) + "x" + std::to_string(a.size) + "_T" + std::to_string(a.tiles) + "_s" +
         format_real(a.log_var) + "_seed" + std::to_string(a.seed);
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const GroundTruth truth = make_ground_truth(a.size, a.tiles, a.log_var, a.seed, a.fraction);
  const fs::path dir = a.out_dir;
  fs::create_directories(dir);
  const std::string prefix = instance_prefix(a);
  const fs::path clean = dir / (prefix + ".clean.csv");
  const fs::path noisy = dir / (prefix + ".noisy.csv");
  const fs::path json = dir / (prefix + ".truth.json");
  write_matrix_csv(clean, truth.clean.values());
  write_matrix_csv(noisy, truth.noisy.values());
  write_tiling_json(json, truth.tiling);
  out << clean.string() << '\n' << noisy.string() << '\n' << json.string() << '\n';
  return kExitOk;
}

std::optional<std::size_t> parse_tiles(const std::string& text) {
  if (text == "auto") return std::nullopt;
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw CLI::ValidationError("--tiles", "expected a non-negative integer or 'auto', got '" + text + "'");
  }
  return value;
}

fs::path default_prefix(const std::string& input, const std::string& method) {
  fs::path p = input;
  if (p.extension() == ".csv") p.replace_extension();
  return p.string() + "." + method;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const std::optional<std::size_t> fixed = parse_tiles(a.tiles);
  const Method method = parse_method(a.method);
  const DataMatrix data(read_matrix_csv(a.input));
  const LikelihoodField field = gaussian_likelihood_field(data, a.tile_mean, a.bg_mean, a.sigma);

  SolverParams params;
  params.rng_seed = a.seed;
  params.max_iterations = a.max_iterations;
  params.restarts = a.restarts;
  params.validate();

  Tiling tiling;
  bool converged = true;
  std::vector<double> residuals;
  std::vector<double> costs;
  if (!fixed) {
    const Solver solver = method == Method::sp ? sum_product_solver()
                          : method == Method::icm ? icm_solver()
                                                  : pca_solver(data);
    ModelSelection sel = select_tile_count(solver, field, a.t_max, params);
    tiling = std::move(sel.tiling);
    converged = sel.converged;
    costs = std::move(sel.costs);
  } else if (method == Method::sp) {
    SumProductResult r = run_sum_product(field, *fixed, params);
    tiling = std::move(r.tiling);
    converged = r.converged;
    residuals = std::move(r.residuals);
  } else if (method == Method::icm) {
    IcmResult r = run_icm(field, *fixed, params);
    tiling = std::move(r.tiling);
    converged = r.converged;
  } else {
    tiling = run_pca_tiles(data, *fixed, field);
  }
  tiling = prune_empty(std::move(tiling));

  TilingMeta meta{a.method, converged, ""};
  if (!converged) {
    meta.warning = method == Method::sp ? "sum-product did not converge within " + std::to_string(a.max_iterations) + " sweeps"
                                        : "ICM did not reach a fixed point within " + std::to_string(a.max_iterations) + " sweeps";
  }
  const fs::path prefix = a.out.empty() ? default_prefix(a.input, a.method) : fs::path(a.out);
  if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
  const fs::path json = prefix.string() + ".tiling.json";
  const fs::path labels = prefix.string() + ".labels.csv";
  write_tiling_json(json, tiling, meta);
  write_labels_csv(labels, labels_from_tiling(tiling));

  if (!a.trace.empty()) {
    std::ofstream trace(a.trace, std::ios::binary | std::ios::trunc);
    if (!trace) throw IoError("cannot write " + a.trace);
    if (!costs.empty()) {
      trace << "tiles,mdl_cost\n";
      for (std::size_t t = 0; t < costs.size(); ++t) trace << t << ',' << format_real(costs[t]) << '\n';
    } else {
      trace << "sweep,residual\n";
      for (std::size_t k = 0; k < residuals.size(); ++k) trace << k + 1 << ',' << format_real(residuals[k]) << '\n';
    }
  }

  out << "method=" << a.method << " tiles=" << tiling.tile_count() << " mdl_cost=" << format_real(mdl_cost(tiling, field))
      << " converged=" << (converged ? "true" : "false") << '\n';
  out << json.string() << '\n' << labels.string() << '\n';
  if (!meta.warning.empty()) out << "warning: " << meta.warning << '\n';
  return kExitOk;
}

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const DataMatrix data(read_matrix_csv(a.data));
  const auto rows = static_cast<std::size_t>(data.rows());
  const auto cols = static_cast<std::size_t>(data.cols());
  const Tiling truth = read_tiling_json(a.truth, rows, cols);
  const Tiling pred = read_tiling_json(a.pred, rows, cols);
  if (truth.n_rows != rows || truth.n_cols != cols || pred.n_rows != rows || pred.n_cols != cols) {
    throw InvalidArgument("truth, prediction and data dimensions differ");
  }
  const LikelihoodField field = gaussian_likelihood_field(data, a.tile_mean, a.bg_mean, a.sigma);
  const ElementLabels truth_labels = labels_from_tiling(truth);
  const ElementLabels pred_labels = labels_from_tiling(pred);

  const std::string header = "instance,method,t_selected,hamming,classification_error,relative_cost\n";
  const std::string row = a.id + ',' + a.method + ',' + std::to_string(prune_empty(pred).tile_count()) + ',' +
                          format_real(hamming(truth_labels, pred_labels)) + ',' +
                          format_real(classification_error(truth_labels, pred_labels)) + ',' +
                          format_real(relative_cost(pred, truth, field)) + '\n';
  if (a.append.empty()) {
    out << header << row;
    return kExitOk;
  }
  const bool fresh = !fs::exists(a.append) || fs::file_size(a.append) == 0;
  std::ofstream file(a.append, std::ios::binary | std::ios::app);
  if (!file) throw IoError("cannot append to " + a.append);
  if (fresh) file << header;
  file << row;
  out << row;
  return kExitOk;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const BenchConfig config = read_bench_config(a.config);
  const std::size_t threads = a.threads > 0 ? a.threads : bench_threads();
  const BenchReport report = run_bench(config, threads);
  std::size_t failures = 0;
  for (const BenchRow& r : report.rows) failures += r.error.empty() ? 0 : 1;
  out << report.rows.size() << " rows, " << failures << " failed\n"
      << report.results_csv.string() << '\n'
      << report.summary_csv.string() << '\n'
      << report.timings_csv.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix tile analysis: decompose a matrix into non-overlapping tiles", "mta"};
  app.require_subcommand(1);
  const std::vector<std::string> method_names{"sp", "icm", "pca"};

  GenerateArgs gen;
  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic instance: clean.csv, noisy.csv, truth.json");
  generate->add_option("--size", gen.size, "Matrix size n (n x n)")->required()->check(CLI::PositiveNumber);
  generate->add_option("--tiles", gen.tiles, "Number of planted tiles")->required();
  generate->add_option("--log-var", gen.log_var, "Noise level log10(sigma^2)")->required();
  generate->add_option("--seed", gen.seed, "Random seed");
  generate->add_option("--fraction", gen.fraction, "Area of each tile as a fraction of the matrix");
  generate->add_option("--out-dir", gen.out_dir, "Output directory");

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Fit tiles to a data matrix");
  solve_cmd->add_option("input", solve.input, "Data matrix CSV")->required();
  solve_cmd->add_option("--method", solve.method, "sp, icm or pca")->required()->check(CLI::IsMember(method_names));
  solve_cmd->add_option("--tiles", solve.tiles, "Tile count or 'auto'");
  solve_cmd->add_option("--sigma", solve.sigma, "Likelihood standard deviation")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--tile-mean", solve.tile_mean, "Expected value inside tiles");
  solve_cmd->add_option("--bg-mean", solve.bg_mean, "Expected background value");
  solve_cmd->add_option("--t-max", solve.t_max, "Largest tile count tried with --tiles auto");
  solve_cmd->add_option("--seed", solve.seed, "Random seed for ICM restarts");
  solve_cmd->add_option("--max-iterations", solve.max_iterations, "Sweep budget per run");
  solve_cmd->add_option("--restarts", solve.restarts, "ICM restarts");
  solve_cmd->add_option("--out", solve.out, "Output prefix (default: input without .csv plus .<method>)");
  solve_cmd->add_option("--trace", solve.trace, "CSV of per-sweep residuals, or per-T costs with --tiles auto");

  EvalArgs ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Score a predicted tiling against the truth");
  eval_cmd->add_option("--truth", ev.truth, "Ground-truth tiling JSON")->required();
  eval_cmd->add_option("--pred", ev.pred, "Predicted tiling JSON")->required();
  eval_cmd->add_option("--data", ev.data, "Data matrix CSV used for the cost")->required();
  eval_cmd->add_option("--sigma", ev.sigma, "Likelihood standard deviation")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--tile-mean", ev.tile_mean, "Expected value inside tiles");
  eval_cmd->add_option("--bg-mean", ev.bg_mean, "Expected background value");
  eval_cmd->add_option("--id", ev.id, "Instance id written to the row");
  eval_cmd->add_option("--method", ev.method, "Method name written to the row");
  eval_cmd->add_option("--append", ev.append, "Append the row to this CSV (header written once)");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Run a benchmark grid from a key = value config");
  bench_cmd->add_option("config", bench.config, "Config file")->required();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (default: MTA_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*eval_cmd) return cmd_eval(ev, out);
    return cmd_bench(bench, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GenerationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitGeneration;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return *generate || *bench_cmd ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("mta");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace mta
