#include "mta/io.hpp"

#include "mta/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <type_traits>
#include <system_error>

namespace mta {

namespace {

using nlohmann::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
    throw IoError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) throw IoError("line " + std::to_string(line) + ": non-finite value");
  }
  return value;
}

// Rows of comma-separated fields; blank lines are skipped, ragged rows rejected.
template <typename T>
std::vector<std::vector<T>> parse_table(const std::string& text) {
  std::vector<std::vector<T>> table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t stop = text.find('\n', start);
    if (stop == std::string::npos) stop = text.size();
    ++line_no;
    const std::string_view line = trim(std::string_view(text).substr(start, stop - start));
    start = stop + 1;
    if (line.empty()) continue;
    std::vector<T> row;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      row.push_back(parse_number<T>(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos), line_no));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (!table.empty() && row.size() != table.front().size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(table.front().size()) +
                    " fields, got " + std::to_string(row.size()));
    }
    table.push_back(std::move(row));
  }
  if (table.empty()) throw IoError("no data rows");
  return table;
}

std::vector<std::size_t> one_based(const Indicator& flags) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < flags.size(); ++k) {
    if (flags[k] != 0) out.push_back(k + 1);
  }
  return out;
}

Indicator from_one_based(const json& list, std::size_t limit, const char* what) {
  if (!list.is_array()) throw IoError(std::string(what) + " must be an array");
  Indicator flags(limit, 0);
  for (const json& entry : list) {
    if (!entry.is_number_integer()) throw IoError(std::string(what) + " entries must be integers");
    const auto index = entry.get<long long>();
    if (index < 1 || static_cast<std::size_t>(index) > limit) {
      throw IoError(std::string(what) + " index " + std::to_string(index) + " out of range 1.." + std::to_string(limit));
    }
    flags[static_cast<std::size_t>(index - 1)] = 1;
  }
  return flags;
}

}  // namespace

std::string format_real(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw IoError("cannot format number");
  return std::string(buffer, end);
}

Matrix parse_matrix_csv(const std::string& text) {
  const auto table = parse_table<double>(text);
  Matrix out(static_cast<Eigen::Index>(table.size()), static_cast<Eigen::Index>(table.front().size()));
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table[i][j];
  }
  return out;
}

std::string matrix_to_csv(const Matrix& matrix) {
  std::string text;
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0) text += ',';
      text += format_real(matrix(i, j));
    }
    text += '\n';
  }
  return text;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  try {
    return parse_matrix_csv(read_text(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& matrix) { write_text(path, matrix_to_csv(matrix)); }

void write_labels_csv(const std::filesystem::path& path, const ElementLabels& labels) {
  std::string text;
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
      if (j > 0) text += ',';
      text += std::to_string(labels(i, j));
    }
    text += '\n';
  }
  write_text(path, text);
}

ElementLabels read_labels_csv(const std::filesystem::path& path) {
  try {
    const auto table = parse_table<int>(read_text(path));
    ElementLabels out(static_cast<Eigen::Index>(table.size()), static_cast<Eigen::Index>(table.front().size()));
    for (std::size_t i = 0; i < table.size(); ++i) {
      for (std::size_t j = 0; j < table[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table[i][j];
    }
    return out;
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string tiling_to_json(const Tiling& tiling, const std::optional<TilingMeta>& meta) {
  json doc;
  doc["n_rows"] = tiling.n_rows;
  doc["n_cols"] = tiling.n_cols;
  doc["tile_count"] = tiling.tile_count();
  json tiles = json::array();
  for (const Tile& tile : tiling.tiles) tiles.push_back({{"rows", one_based(tile.rows)}, {"cols", one_based(tile.cols)}});
  doc["tiles"] = std::move(tiles);
  if (meta) {
    doc["method"] = meta->method;
    doc["converged"] = meta->converged;
    if (!meta->warning.empty()) doc["warning"] = meta->warning;
  }
  return doc.dump(2) + "\n";
}

void write_tiling_json(const std::filesystem::path& path, const Tiling& tiling, const std::optional<TilingMeta>& meta) {
  write_text(path, tiling_to_json(tiling, meta));
}

Tiling parse_tiling_json(const std::string& text, std::optional<std::size_t> rows, std::optional<std::size_t> cols) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw IoError("tiling JSON must be an object");
  auto dimension = [&](const char* key, std::optional<std::size_t> fallback) -> std::size_t {
    if (doc.contains(key)) {
      if (!doc[key].is_number_unsigned()) throw IoError(std::string(key) + " must be a non-negative integer");
      return doc[key].get<std::size_t>();
    }
    if (!fallback) throw IoError(std::string("missing ") + key);
    return *fallback;
  };
  Tiling tiling(dimension("n_rows", rows), dimension("n_cols", cols));
  if (!doc.contains("tiles") || !doc["tiles"].is_array()) throw IoError("missing tiles array");
  for (const json& entry : doc["tiles"]) {
    if (!entry.is_object() || !entry.contains("rows") || !entry.contains("cols")) {
      throw IoError("each tile needs rows and cols");
    }
    tiling.tiles.push_back(Tile{from_one_based(entry["rows"], tiling.n_rows, "rows"),
                                from_one_based(entry["cols"], tiling.n_cols, "cols")});
  }
  if (doc.contains("tile_count") &&
      (!doc["tile_count"].is_number_unsigned() || doc["tile_count"].get<std::size_t>() != tiling.tile_count())) {
    throw IoError("tile_count does not match the tiles array");
  }
  return tiling;
}

Tiling read_tiling_json(const std::filesystem::path& path, std::optional<std::size_t> rows,
                        std::optional<std::size_t> cols) {
  try {
    return parse_tiling_json(read_text(path), rows, cols);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace mta
