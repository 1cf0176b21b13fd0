#include <lutgrid/png_io.hpp>

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace lutgrid {

namespace {

struct ReadCursor
{
    const std::vector<std::uint8_t>* bytes;
    std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length)
{
    auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cursor->offset + length > cursor->bytes->size()) {
        png_error(png, "truncated data");
        return;
    }
    std::memcpy(out, cursor->bytes->data() + cursor->offset, length);
    cursor->offset += length;
}

void write_to_memory(png_structp png, png_bytep data, png_size_t length)
{
    auto* sink = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    sink->insert(sink->end(), data, data + length);
}

void flush_noop(png_structp) {}

struct ErrorSlot
{
    char message[256];
};

// libpng is C; errors leave via longjmp back into the setjmp frame of the caller.
[[noreturn]] void raise_png_error(png_structp png, png_const_charp message)
{
    auto* slot = static_cast<ErrorSlot*>(png_get_error_ptr(png));
    if (slot)
        std::snprintf(slot->message, sizeof(slot->message), "%s", message);
    png_longjmp(png, 1);
}

// setjmp frames must not own objects with destructors; these two helpers
// only touch plain pointers.
bool read_rows(png_structp png, png_infop info, ReadCursor* cursor, Rgb8Image* image, std::vector<png_bytep>* rows,
               const char** failure)
{
    if (setjmp(png_jmpbuf(png)))
        return false;
    png_set_read_fn(png, cursor, read_from_memory);
    png_read_info(png, info);

    const png_byte color_type = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (depth == 16)
        png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color_type & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS))
        png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(width) * 3) {
        *failure = "unsupported pixel layout";
        return false;
    }
    image->width = width;
    image->height = height;
    image->pixels.assign(static_cast<std::size_t>(width) * height * 3, 0);
    rows->resize(height);
    for (int y = 0; y < height; ++y)
        (*rows)[y] = image->pixels.data() + static_cast<std::size_t>(y) * width * 3;
    png_read_image(png, rows->data());
    png_read_end(png, nullptr);
    return true;
}

bool write_rows(png_structp png, png_infop info, const Rgb8Image* image, std::vector<std::uint8_t>* out)
{
    if (setjmp(png_jmpbuf(png)))
        return false;
    png_set_write_fn(png, out, write_to_memory, flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image->width), static_cast<png_uint_32>(image->height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image->height; ++y)
        png_write_row(png, image->pixels.data() + static_cast<std::size_t>(y) * image->width * 3);
    png_write_end(png, nullptr);
    return true;
}

void ignore_warning(png_structp, png_const_charp) {}

} // namespace

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write '" + path.string() + "'");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw IoError("short write to '" + path.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename onto '" + path.string() + "': " + ec.message());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text)
{
    write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

Rgb8Image decode_png(const std::vector<std::uint8_t>& bytes)
{
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
        throw FormatError("png: bad signature");

    ErrorSlot slot{"unknown error"};
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &slot, raise_png_error, ignore_warning);
    if (!png)
        throw FormatError("png: cannot allocate decoder");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw FormatError("png: cannot allocate decoder");
    }

    ReadCursor cursor{&bytes, 0};
    Rgb8Image image;
    std::vector<png_bytep> rows;
    const char* failure = nullptr;
    const bool ok = read_rows(png, info, &cursor, &image, &rows, &failure);
    png_destroy_read_struct(&png, &info, nullptr);
    if (!ok)
        throw FormatError(std::string("png: ") + (failure ? failure : slot.message));
    return image;
}

Rgb8Image read_png(const std::filesystem::path& path)
{
    try {
        return decode_png(read_file_bytes(path));
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_png(const Rgb8Image& image)
{
    if (image.width < 1 || image.height < 1)
        throw InvalidInput("encode_png: empty image");

    ErrorSlot slot{"unknown error"};
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &slot, raise_png_error, ignore_warning);
    if (!png)
        throw FormatError("png: cannot allocate encoder");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw FormatError("png: cannot allocate encoder");
    }

    std::vector<std::uint8_t> out;
    const bool ok = write_rows(png, info, &image, &out);
    png_destroy_write_struct(&png, &info);
    if (!ok)
        throw FormatError(std::string("png: ") + slot.message);
    return out;
}

void write_png(const Rgb8Image& image, const std::filesystem::path& path)
{
    write_file_atomic(path, encode_png(image));
}

} // namespace lutgrid
