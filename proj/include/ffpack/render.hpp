#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "ffpack/model.hpp"

namespace ffpack {

// Plain-text pixmap of the occupancy: one character per cell ('1', '2' or
// '.'), wrapped at cells_per_row, rows separated by newlines.  Cells at or
// beyond the rightmost extent render as '.', and rows consisting only of
// such cells are dropped, so an empty configuration renders as zero rows.
std::string render_snapshot(const Configuration& config, std::int64_t cells_per_row);

// Inverse of render_snapshot.  Whitespace is ignored; a maximal run of '2'
// cells of odd length cannot come from whole 2-items and is rejected.  Item
// ids are assigned left to right.
Configuration parse_snapshot(std::string_view text);

Configuration read_snapshot_file(const std::string& path);
void write_snapshot_file(const Configuration& config, std::int64_t cells_per_row,
                         const std::string& path);

}  // namespace ffpack
