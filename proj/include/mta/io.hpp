#pragma once

#include "mta/types.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace mta {

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

// Comma-separated, row-major, no header.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& matrix);
Matrix parse_matrix_csv(const std::string& text);
std::string matrix_to_csv(const Matrix& matrix);

void write_labels_csv(const std::filesystem::path& path, const ElementLabels& labels);
ElementLabels read_labels_csv(const std::filesystem::path& path);

struct TilingMeta {
  std::string method;
  bool converged = true;
  std::string warning;
};

// {"n_rows", "n_cols", "tile_count", "tiles": [{"rows": [...], "cols": [...]}]}
// with 1-based indices.
std::string tiling_to_json(const Tiling& tiling, const std::optional<TilingMeta>& meta = std::nullopt);
void write_tiling_json(const std::filesystem::path& path, const Tiling& tiling,
                       const std::optional<TilingMeta>& meta = std::nullopt);

// Dimensions come from the file when present, otherwise from `rows`/`cols`.
Tiling parse_tiling_json(const std::string& text, std::optional<std::size_t> rows = std::nullopt,
                         std::optional<std::size_t> cols = std::nullopt);
Tiling read_tiling_json(const std::filesystem::path& path, std::optional<std::size_t> rows = std::nullopt,
                        std::optional<std::size_t> cols = std::nullopt);

}  // namespace mta
