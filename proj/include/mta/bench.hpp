#pragma once

#include "mta/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mta {

enum class Method { sp, icm, pca };

std::string method_name(Method method);
Method parse_method(const std::string& name);

struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> tile_counts;
  std::vector<double> noise_log_variances;
  std::size_t replicates = 1;
  std::vector<Method> methods;
  std::uint64_t seed_base = 0;
  std::filesystem::path output_dir = "bench_out";

  // When false the planted tile count is handed to the solvers.
  bool auto_tiles = true;
  std::size_t t_max = 12;
  double sigma = 0.5;
  double area_fraction = 0.04;

  void validate() const;
};

// Flat key = value text; lists are comma-separated; '#' starts a comment.
BenchConfig parse_bench_config(const std::string& text);
BenchConfig read_bench_config(const std::filesystem::path& path);

struct BenchRow {
  std::size_t instance = 0;
  std::size_t size = 0;
  std::size_t tiles = 0;
  double log_variance = 0.0;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  Method method = Method::sp;
  std::size_t t_selected = 0;
  double hamming = 0.0;
  double classification_error = 0.0;
  double relative_cost = 0.0;
  double wall_time = 0.0;
  bool converged = true;
  std::string error;
};

struct BenchReport {
  std::vector<BenchRow> rows;  // ordered by (instance, method)
  std::filesystem::path results_csv;
  std::filesystem::path summary_csv;
  std::filesystem::path timings_csv;
};

// Worker count for the bench grid: MTA_THREADS if set, else hardware concurrency.
std::size_t bench_threads();

BenchReport run_bench(const BenchConfig& config, std::size_t threads);

std::string results_csv(const std::vector<BenchRow>& rows);
std::string summary_csv(const std::vector<BenchRow>& rows);

}  // namespace mta
