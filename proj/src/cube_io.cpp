#include <lutgrid/lut3d.hpp>
#include <lutgrid/png_io.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lutgrid {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::filesystem::path& path, int line, const std::string& what)
{
    throw ParseError(path.string() + ":" + std::to_string(line) + ": " + what);
}

bool parse_float(const std::string& token, float& out)
{
    errno = 0;
    char* end = nullptr;
    out = std::strtof(token.c_str(), &end);
    return end != token.c_str() && *end == '\0' && errno == 0;
}

std::vector<std::string> split_fields(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string tok; in >> tok;)
        fields.push_back(tok);
    return fields;
}

} // namespace

Lut3D<float> read_cube(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");

    int size = 0;
    int size_line = 0;
    std::vector<float> values;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        const auto fields = split_fields(line);
        const std::string& key = fields[0];

        if (key == "TITLE")
            continue;
        if (key == "LUT_3D_SIZE") {
            if (size != 0)
                fail(path, line_no, "duplicate LUT_3D_SIZE");
            if (fields.size() != 2)
                fail(path, line_no, "LUT_3D_SIZE expects one value");
            char* end = nullptr;
            const long n = std::strtol(fields[1].c_str(), &end, 10);
            if (*end != '\0' || n < 2 || n > 256)
                fail(path, line_no, "invalid LUT_3D_SIZE '" + fields[1] + "'");
            size = static_cast<int>(n);
            size_line = line_no;
            values.reserve(static_cast<std::size_t>(size) * size * size * 3);
            continue;
        }
        if (key == "DOMAIN_MIN" || key == "DOMAIN_MAX") {
            const float expected = key == "DOMAIN_MIN" ? 0.0f : 1.0f;
            float v = 0.0f;
            if (fields.size() != 4)
                fail(path, line_no, key + " expects three values");
            for (int c = 1; c < 4; ++c)
                if (!parse_float(fields[c], v) || v != expected)
                    fail(path, line_no, "only the default " + key + " is supported");
            continue;
        }
        if (key == "LUT_1D_SIZE")
            fail(path, line_no, "1D LUTs are not supported");

        if (size == 0)
            fail(path, line_no, "data row before LUT_3D_SIZE");
        if (fields.size() != 3)
            fail(path, line_no, "expected 3 values, found " + std::to_string(fields.size()));
        for (const auto& f : fields) {
            float v = 0.0f;
            if (!parse_float(f, v))
                fail(path, line_no, "non-numeric value '" + f + "'");
            values.push_back(v);
        }
    }

    if (size == 0)
        fail(path, line_no, "missing LUT_3D_SIZE");
    const std::size_t expected_rows = static_cast<std::size_t>(size) * size * size;
    if (values.size() != expected_rows * 3)
        fail(path, size_line, "expected " + std::to_string(expected_rows) + " rows, found " +
                                  std::to_string(values.size() / 3));

    return Lut3D<float>(size, Eigen::Map<const Eigen::VectorXf>(values.data(), Eigen::Index(values.size())));
}

void write_cube(const Lut3D<float>& lut, const std::filesystem::path& path, const std::string& title)
{
    std::string out;
    out.reserve(static_cast<std::size_t>(lut.vertex_count()) * 36 + 64);
    out += "TITLE \"" + title + "\"\n";
    out += "LUT_3D_SIZE " + std::to_string(lut.size()) + "\n";
    char row[96];
    for (Eigen::Index v = 0; v < lut.vertex_count(); ++v) {
        const Rgb<float> e = lut.entry(static_cast<int>(v));
        std::snprintf(row, sizeof(row), "%.9f %.9f %.9f\n", double(e[0]), double(e[1]), double(e[2]));
        out += row;
    }
    write_file_atomic(path, out);
}

} // namespace lutgrid
