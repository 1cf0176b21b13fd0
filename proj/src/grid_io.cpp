#include <lutgrid/grid_io.hpp>
#include <lutgrid/png_io.hpp>

#include <bit>
#include <cstring>

namespace lutgrid {

namespace {

constexpr char kMagic[4] = {'B', 'G', 'W', '1'};
constexpr std::size_t kHeaderSize = 4 + 1 + 12;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& in, std::size_t at)
{
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
        v |= std::uint32_t(in[at + b]) << (8 * b);
    return v;
}

std::vector<std::uint8_t> header(const GridDims& dims, GridDtype dtype)
{
    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    out.push_back(static_cast<std::uint8_t>(dtype));
    put_u32(out, static_cast<std::uint32_t>(dims.nx));
    put_u32(out, static_cast<std::uint32_t>(dims.ny));
    put_u32(out, static_cast<std::uint32_t>(dims.nl));
    return out;
}

} // namespace

std::vector<std::uint8_t> encode_grid(const WeightGrid<float>& grid)
{
    auto out = header(grid.dims(), GridDtype::fp32);
    out.reserve(out.size() + 4 * static_cast<std::size_t>(grid.values().size()));
    for (Eigen::Index n = 0; n < grid.values().size(); ++n)
        put_u32(out, std::bit_cast<std::uint32_t>(grid.values()[n]));
    return out;
}

std::vector<std::uint8_t> encode_grid(const QuantizedGrid& grid)
{
    auto out = header(grid.dims, GridDtype::int8);
    put_u32(out, std::bit_cast<std::uint32_t>(grid.scale));
    put_u32(out, std::bit_cast<std::uint32_t>(grid.zero_point));
    for (std::int8_t q : grid.payload)
        out.push_back(std::bit_cast<std::uint8_t>(q));
    return out;
}

StoredGrid decode_grid(const std::vector<std::uint8_t>& bytes)
{
    if (bytes.size() < 4)
        throw FormatError("BGW1: truncated header (magic)");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw FormatError("BGW1: bad magic");
    if (bytes.size() < 5)
        throw FormatError("BGW1: truncated header (dtype)");
    const std::uint8_t dtype = bytes[4];
    if (dtype != std::uint8_t(GridDtype::fp32) && dtype != std::uint8_t(GridDtype::int8))
        throw FormatError("BGW1: unknown dtype " + std::to_string(dtype));
    if (bytes.size() < kHeaderSize)
        throw FormatError("BGW1: truncated header (dimensions)");

    const std::uint32_t nx = get_u32(bytes, 5);
    const std::uint32_t ny = get_u32(bytes, 9);
    const std::uint32_t nl = get_u32(bytes, 13);
    if (nx < 2 || ny < 2 || nl < 2 || nx > 65536 || ny > 65536 || nl > 65536)
        throw FormatError("BGW1: invalid dimensions " + std::to_string(nx) + "x" + std::to_string(ny) + "x" +
                          std::to_string(nl));
    const GridDims dims{int(nx), int(ny), int(nl)};
    const std::size_t count = static_cast<std::size_t>(dims.count());

    if (dtype == std::uint8_t(GridDtype::fp32)) {
        const std::size_t expected = kHeaderSize + 4 * count;
        if (bytes.size() < expected)
            throw FormatError("BGW1: truncated payload");
        if (bytes.size() > expected)
            throw FormatError("BGW1: trailing bytes after payload");
        Eigen::VectorXf values(dims.count());
        for (std::size_t n = 0; n < count; ++n)
            values[Eigen::Index(n)] = std::bit_cast<float>(get_u32(bytes, kHeaderSize + 4 * n));
        if (!values.allFinite() || (values.array() < 0.0f).any() || (values.array() > 1.0f).any())
            throw FormatError("BGW1: payload values outside [0,1]");
        return WeightGrid<float>(dims, std::move(values));
    }

    const std::size_t params_end = kHeaderSize + 8;
    if (bytes.size() < params_end)
        throw FormatError("BGW1: truncated header (scale/zero_point)");
    QuantizedGrid q;
    q.dims = dims;
    q.scale = std::bit_cast<float>(get_u32(bytes, kHeaderSize));
    q.zero_point = std::bit_cast<std::int32_t>(get_u32(bytes, kHeaderSize + 4));
    if (!(q.scale > 0.0f) || !std::isfinite(q.scale))
        throw FormatError("BGW1: scale must be positive");
    if (q.zero_point < -128 || q.zero_point > 127)
        throw FormatError("BGW1: zero_point outside [-128,127]");
    if (bytes.size() < params_end + count)
        throw FormatError("BGW1: truncated payload");
    if (bytes.size() > params_end + count)
        throw FormatError("BGW1: trailing bytes after payload");
    q.payload.resize(count);
    for (std::size_t n = 0; n < count; ++n)
        q.payload[n] = std::bit_cast<std::int8_t>(bytes[params_end + n]);
    return q;
}

void write_grid(const WeightGrid<float>& grid, const std::filesystem::path& path)
{
    write_file_atomic(path, encode_grid(grid));
}

void write_grid(const QuantizedGrid& grid, const std::filesystem::path& path)
{
    write_file_atomic(path, encode_grid(grid));
}

StoredGrid read_grid_file(const std::filesystem::path& path)
{
    try {
        return decode_grid(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

WeightGrid<float> read_grid(const std::filesystem::path& path)
{
    auto stored = read_grid_file(path);
    if (auto* grid = std::get_if<WeightGrid<float>>(&stored))
        return std::move(*grid);
    throw FormatError(path.string() + ": BGW1: expected dtype fp32, found int8");
}

} // namespace lutgrid
