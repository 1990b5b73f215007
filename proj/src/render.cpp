#include "ffpack/render.hpp"

#include <cctype>
#include <fstream>
#include <stdexcept>

namespace ffpack {

std::string render_snapshot(const Configuration& config, std::int64_t cells_per_row) {
    if (cells_per_row < 1) throw std::invalid_argument("render_snapshot: cells_per_row must be >= 1");
    const std::int64_t extent = config.rightmost_extent();
    std::string out;
    for (std::int64_t row_start = 0; row_start < extent; row_start += cells_per_row) {
        for (std::int64_t c = row_start; c < row_start + cells_per_row; ++c) {
            const auto id = config.item_at(c);
            if (id == Configuration::kNoItem) {
                out += '.';
            } else {
                out += item_type_name(config.find_item(id)->type)[0];
            }
        }
        out += '\n';
    }
    return out;
}

Configuration parse_snapshot(std::string_view text) {
    std::string cells;
    cells.reserve(text.size());
    std::size_t offset = 0;
    for (char ch : text) {
        ++offset;
        if (std::isspace(static_cast<unsigned char>(ch))) continue;
        if (ch != '1' && ch != '2' && ch != '.')
            throw std::runtime_error("snapshot: unexpected character '" + std::string(1, ch) +
                                     "' at offset " + std::to_string(offset - 1));
        cells += ch;
    }

    Configuration config;
    std::size_t i = 0;
    while (i < cells.size()) {
        if (cells[i] == '.') {
            ++i;
        } else if (cells[i] == '1') {
            config.place_at(ItemType::One, static_cast<std::int64_t>(i));
            ++i;
        } else {
            if (i + 1 >= cells.size() || cells[i + 1] != '2')
                throw std::runtime_error("snapshot: odd run of '2' cells ending at cell " +
                                         std::to_string(i));
            config.place_at(ItemType::Two, static_cast<std::int64_t>(i));
            i += 2;
        }
    }
    return config;
}

Configuration read_snapshot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_snapshot(text);
}

void write_snapshot_file(const Configuration& config, std::int64_t cells_per_row,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write snapshot file: " + path);
    out << render_snapshot(config, cells_per_row);
}

}  // namespace ffpack
