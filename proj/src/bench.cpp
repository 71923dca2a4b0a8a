#include "mta/bench.hpp"

#include "mta/error.hpp"
#include "mta/eval.hpp"
#include "mta/icm.hpp"
#include "mta/io.hpp"
#include "mta/likelihood.hpp"
#include "mta/model_selection.hpp"
#include "mta/pca.hpp"
#include "mta/sumprod.hpp"
#include "mta/synth.hpp"
#include "mta/tiling.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

namespace mta {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [stop, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || stop != end || begin == end) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  for (const std::string& item : split_list(text)) out.push_back(parse_value<T>(key, item));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw InvalidArgument("config key '" + key + "': expected a boolean, got '" + text + "'");
}

// Keeps a free-text error inside one CSV field.
std::string csv_safe(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = c == ',' ? ';' : ' ';
  }
  return text;
}

struct Instance {
  std::size_t index;
  std::size_t size;
  std::size_t tiles;
  double log_variance;
  std::size_t replicate;
  std::uint64_t seed;
};

std::vector<Instance> expand_grid(const BenchConfig& config) {
  std::vector<Instance> grid;
  for (std::size_t n : config.sizes) {
    for (std::size_t t : config.tile_counts) {
      for (double lv : config.noise_log_variances) {
        for (std::size_t r = 0; r < config.replicates; ++r) {
          const std::size_t index = grid.size();
          grid.push_back(Instance{index, n, t, lv, r, config.seed_base + index});
        }
      }
    }
  }
  return grid;
}

Solver solver_for(Method method, const DataMatrix& data) {
  switch (method) {
    case Method::sp: return sum_product_solver();
    case Method::icm: return icm_solver();
    case Method::pca: return pca_solver(data);
  }
  throw InvalidArgument("unknown method");
}

std::vector<BenchRow> run_instance(const BenchConfig& config, const Instance& inst) {
  std::vector<BenchRow> rows;
  for (Method method : config.methods) {
    BenchRow row;
    row.instance = inst.index;
    row.size = inst.size;
    row.tiles = inst.tiles;
    row.log_variance = inst.log_variance;
    row.replicate = inst.replicate;
    row.seed = inst.seed;
    row.method = method;
    rows.push_back(row);
  }
  try {
    const GroundTruth truth = make_ground_truth(inst.size, inst.tiles, inst.log_variance, inst.seed, config.area_fraction);
    const LikelihoodField field = gaussian_likelihood_field(truth.noisy, 1.0, 0.0, config.sigma);
    const ElementLabels truth_labels = labels_from_tiling(truth.tiling);
    SolverParams params;
    params.rng_seed = inst.seed;
    for (BenchRow& row : rows) {
      try {
        const Solver solver = solver_for(row.method, truth.noisy);
        const auto start = std::chrono::steady_clock::now();
        Tiling found;
        if (config.auto_tiles) {
          ModelSelection sel = select_tile_count(solver, field, config.t_max, params);
          found = std::move(sel.tiling);
          row.converged = sel.converged;
        } else {
          SolverOutcome outcome = solver(field, inst.tiles, params);
          found = prune_empty(std::move(outcome.tiling));
          row.converged = outcome.converged;
        }
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const ElementLabels labels = labels_from_tiling(found);
        row.t_selected = found.tile_count();
        row.hamming = hamming(truth_labels, labels);
        row.classification_error = classification_error(truth_labels, labels);
        row.relative_cost = relative_cost(found, truth.tiling, field);
      } catch (const std::exception& e) {
        row.error = csv_safe(e.what());
      }
    }
  } catch (const std::exception& e) {
    for (BenchRow& row : rows) row.error = csv_safe(e.what());
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string method_name(Method method) {
  switch (method) {
    case Method::sp: return "sp";
    case Method::icm: return "icm";
    case Method::pca: return "pca";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "sp") return Method::sp;
  if (name == "icm") return Method::icm;
  if (name == "pca") return Method::pca;
  throw InvalidArgument("unknown method '" + name + "' (expected sp, icm or pca)");
}

void BenchConfig::validate() const {
  if (sizes.empty() || tile_counts.empty() || noise_log_variances.empty() || methods.empty()) {
    throw InvalidArgument("sizes, tile_counts, noise_log_variances and methods must be non-empty");
  }
  if (replicates < 1) throw InvalidArgument("replicates must be at least 1");
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(area_fraction > 0.0)) throw InvalidArgument("area_fraction must be positive");
}

BenchConfig parse_bench_config(const std::string& text) {
  BenchConfig config;
  std::stringstream stream(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "sizes") {
      config.sizes = parse_list<std::size_t>(key, value);
    } else if (key == "tile_counts") {
      config.tile_counts = parse_list<std::size_t>(key, value);
    } else if (key == "noise_log_variances") {
      config.noise_log_variances = parse_list<double>(key, value);
    } else if (key == "replicates") {
      config.replicates = parse_value<std::size_t>(key, value);
    } else if (key == "methods") {
      config.methods.clear();
      for (const std::string& name : split_list(value)) config.methods.push_back(parse_method(name));
    } else if (key == "seed_base") {
      config.seed_base = parse_value<std::uint64_t>(key, value);
    } else if (key == "output_dir") {
      config.output_dir = value;
    } else if (key == "auto_tiles") {
      config.auto_tiles = parse_bool(key, value);
    } else if (key == "t_max") {
      config.t_max = parse_value<std::size_t>(key, value);
    } else if (key == "sigma") {
      config.sigma = parse_value<double>(key, value);
    } else if (key == "area_fraction") {
      config.area_fraction = parse_value<double>(key, value);
    } else {
      throw InvalidArgument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  config.validate();
  return config;
}

BenchConfig read_bench_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_bench_config(buffer.str());
}

std::size_t bench_threads() {
  if (const char* env = std::getenv("MTA_THREADS")) {
    std::size_t value = 0;
    const std::string text = env;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && end == text.data() + text.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string results_csv(const std::vector<BenchRow>& rows) {
  std::string text =
      "instance,size,tiles,log_variance,replicate,seed,method,t_selected,hamming,classification_error,"
      "relative_cost,converged,error\n";
  for (const BenchRow& r : rows) {
    text += std::to_string(r.instance) + ',' + std::to_string(r.size) + ',' + std::to_string(r.tiles) + ',' +
            format_real(r.log_variance) + ',' + std::to_string(r.replicate) + ',' + std::to_string(r.seed) + ',' +
            method_name(r.method) + ',';
    if (r.error.empty()) {
      text += std::to_string(r.t_selected) + ',' + format_real(r.hamming) + ',' + format_real(r.classification_error) +
              ',' + format_real(r.relative_cost) + ',' + (r.converged ? "true" : "false") + ",\n";
    } else {
      text += ",,,,," + r.error + '\n';
    }
  }
  return text;
}

std::string summary_csv(const std::vector<BenchRow>& rows) {
  struct Totals {
    std::size_t count = 0;
    std::size_t failures = 0;
    double t_selected = 0.0;
    double hamming = 0.0;
    double classification_error = 0.0;
    double relative_cost = 0.0;
  };
  using Key = std::tuple<std::size_t, std::size_t, double, Method>;
  std::vector<Key> order;
  std::map<Key, Totals> groups;
  for (const BenchRow& r : rows) {
    const Key key{r.size, r.tiles, r.log_variance, r.method};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    Totals& g = it->second;
    if (!r.error.empty()) {
      ++g.failures;
      continue;
    }
    ++g.count;
    g.t_selected += static_cast<double>(r.t_selected);
    g.hamming += r.hamming;
    g.classification_error += r.classification_error;
    g.relative_cost += r.relative_cost;
  }
  std::string text =
      "size,tiles,log_variance,method,count,failures,mean_t_selected,mean_hamming,mean_classification_error,"
      "mean_relative_cost\n";
  for (const Key& key : order) {
    const Totals& g = groups.at(key);
    text += std::to_string(std::get<0>(key)) + ',' + std::to_string(std::get<1>(key)) + ',' +
            format_real(std::get<2>(key)) + ',' + method_name(std::get<3>(key)) + ',' + std::to_string(g.count) + ',' +
            std::to_string(g.failures) + ',';
    if (g.count == 0) {
      text += ",,,\n";
      continue;
    }
    const auto n = static_cast<double>(g.count);
    text += format_real(g.t_selected / n) + ',' + format_real(g.hamming / n) + ',' +
            format_real(g.classification_error / n) + ',' + format_real(g.relative_cost / n) + '\n';
  }
  return text;
}

BenchReport run_bench(const BenchConfig& config, std::size_t threads) {
  config.validate();
  const std::vector<Instance> grid = expand_grid(config);
  std::vector<std::vector<BenchRow>> slots(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < grid.size(); k = next.fetch_add(1)) {
      slots[k] = run_instance(config, grid[k]);
    }
  };
  const std::size_t count = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, grid.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();

  BenchReport report;
  for (auto& slot : slots) {
    for (BenchRow& row : slot) report.rows.push_back(std::move(row));
  }
  std::filesystem::create_directories(config.output_dir);
  report.results_csv = config.output_dir / "results.csv";
  report.summary_csv = config.output_dir / "summary.csv";
  report.timings_csv = config.output_dir / "timings.csv";
  write_file(report.results_csv, results_csv(report.rows));
  write_file(report.summary_csv, summary_csv(report.rows));
  std::string timings = "instance,method,wall_time\n";
  for (const BenchRow& r : report.rows) {
    timings += std::to_string(r.instance) + ',' + method_name(r.method) + ',' + format_real(r.wall_time) + '\n';
  }
  write_file(report.timings_csv, timings);
  return report;
}

}  // namespace mta
