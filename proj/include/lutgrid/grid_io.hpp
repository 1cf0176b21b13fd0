#ifndef LUTGRID_GRID_IO_HPP
#define LUTGRID_GRID_IO_HPP

#include <lutgrid/quantizer.hpp>
#include <lutgrid/weight_grid.hpp>

#include <filesystem>
#include <variant>

namespace lutgrid {

// BGW1 layout, little endian:
//   "BGW1" | dtype u8 (0 = fp32, 1 = int8) | nx u32 | ny u32 | nl u32
//   | int8 only: scale f32 | zero_point i32
//   | payload in (i, j, k) order, k fastest

enum class GridDtype : std::uint8_t
{
    fp32 = 0,
    int8 = 1,
};

using StoredGrid = std::variant<WeightGrid<float>, QuantizedGrid>;

std::vector<std::uint8_t> encode_grid(const WeightGrid<float>& grid);
std::vector<std::uint8_t> encode_grid(const QuantizedGrid& grid);
StoredGrid decode_grid(const std::vector<std::uint8_t>& bytes);

void write_grid(const WeightGrid<float>& grid, const std::filesystem::path& path);
void write_grid(const QuantizedGrid& grid, const std::filesystem::path& path);

/// Reads either dtype. Throws FormatError naming the offending field.
StoredGrid read_grid_file(const std::filesystem::path& path);

/// Reads an fp32 grid; an int8 file is a FormatError.
WeightGrid<float> read_grid(const std::filesystem::path& path);

} // namespace lutgrid

#endif // LUTGRID_GRID_IO_HPP
