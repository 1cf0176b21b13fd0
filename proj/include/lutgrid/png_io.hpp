#ifndef LUTGRID_PNG_IO_HPP
#define LUTGRID_PNG_IO_HPP

#include <lutgrid/image.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lutgrid {

/// Decodes any PNG to 8-bit RGB (alpha dropped, gray and palette expanded).
Rgb8Image read_png(const std::filesystem::path& path);
Rgb8Image decode_png(const std::vector<std::uint8_t>& bytes);

std::vector<std::uint8_t> encode_png(const Rgb8Image& image);
void write_png(const Rgb8Image& image, const std::filesystem::path& path);

/// Writes `bytes` to a temporary sibling and renames it over `path`, so a
/// failed write never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

} // namespace lutgrid

#endif // LUTGRID_PNG_IO_HPP
