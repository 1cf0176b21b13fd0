#include <lutgrid/diagnostics.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace lutgrid {

namespace {

std::uint8_t to_byte(float v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

void check_bin(const WeightGrid<float>& grid, int bin, int scale)
{
    if (bin < 0 || bin >= grid.dims().nl)
        throw InvalidInput("luminance bin " + std::to_string(bin) + " outside [0, " +
                           std::to_string(grid.dims().nl - 1) + "]");
    if (scale < 1 || scale > 64)
        throw InvalidInput("scale must lie in [1, 64]");
}

// Node (i, j) becomes a scale x scale block; i runs along x.
template <typename Fn>
Rgb8Image node_image(const GridDims& dims, int scale, Fn color)
{
    Rgb8Image img(dims.nx * scale, dims.ny * scale);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const auto c = color(x / scale, y / scale);
            for (int ch = 0; ch < 3; ++ch)
                img.at(x, y, ch) = c[ch];
        }
    return img;
}

std::string format_value(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

std::array<std::uint8_t, 3> hot_color(float v)
{
    v = std::clamp(v, 0.0f, 1.0f);
    return {to_byte(3.0f * v), to_byte(3.0f * v - 1.0f), to_byte(3.0f * v - 2.0f)};
}

Rgb8Image weight_heatmap(const WeightGrid<float>& grid, int bin, int scale)
{
    check_bin(grid, bin, scale);
    return node_image(grid.dims(), scale, [&](int i, int j) { return hot_color(grid(i, j, bin)); });
}

Rgb8Image weight_gradient_map(const WeightGrid<float>& grid, int bin, int scale)
{
    check_bin(grid, bin, scale);
    const GridDims& d = grid.dims();
    Plane<float> mag(d.ny, d.nx);
    for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i) {
            const int im = std::max(i - 1, 0), ip = std::min(i + 1, d.nx - 1);
            const int jm = std::max(j - 1, 0), jp = std::min(j + 1, d.ny - 1);
            const float gx = (grid(ip, j, bin) - grid(im, j, bin)) / float(ip - im);
            const float gy = (grid(i, jp, bin) - grid(i, jm, bin)) / float(jp - jm);
            mag(j, i) = std::sqrt(gx * gx + gy * gy);
        }
    const float peak = mag.maxCoeff();
    const float inv = peak > 0.0f ? 1.0f / peak : 0.0f;
    return node_image(d, scale, [&](int i, int j) {
        const std::uint8_t g = to_byte(mag(j, i) * inv);
        return std::array<std::uint8_t, 3>{g, g, g};
    });
}

std::string bin_curves_csv(const WeightGrid<float>& grid, const std::vector<std::pair<int, int>>& nodes)
{
    const GridDims& d = grid.dims();
    if (nodes.empty())
        throw InvalidInput("bin_curves_csv: at least one node is required");
    std::string out = "bin,luma";
    for (const auto& [i, j] : nodes) {
        if (i < 0 || i >= d.nx || j < 0 || j >= d.ny)
            throw InvalidInput("node (" + std::to_string(i) + "," + std::to_string(j) + ") outside the grid");
        out += ",w_" + std::to_string(i) + "_" + std::to_string(j);
    }
    out += "\n";
    for (int k = 0; k < d.nl; ++k) {
        out += std::to_string(k) + "," + format_value(double(k) / double(d.nl - 1));
        for (const auto& [i, j] : nodes)
            out += "," + format_value(grid(i, j, k));
        out += "\n";
    }
    return out;
}

Plane<float> difference_plane(const LinearImage<float>& a, const LinearImage<float>& b)
{
    require_same_size(a.width(), a.height(), b.width(), b.height(), "difference map");
    Plane<float> diff = Plane<float>::Zero(a.height(), a.width());
    for (int c = 0; c < 3; ++c)
        diff += (a.channel(c) - b.channel(c)).abs();
    return diff;
}

Rgb8Image difference_map(const LinearImage<float>& a, const LinearImage<float>& b)
{
    const Plane<float> diff = difference_plane(a, b);
    // never stretch below one 8-bit step, so rounding noise stays black
    return plane_to_gray(diff, 0.0f, std::max(diff.maxCoeff(), kMinDifferenceScale));
}

std::string edge_profile_csv(const LinearImage<float>& input, const LinearImage<float>& trilinear,
                             const LinearImage<float>& manifold, ProfileAxis axis, int index)
{
    require_same_size(input.width(), input.height(), trilinear.width(), trilinear.height(), "edge profile");
    require_same_size(input.width(), input.height(), manifold.width(), manifold.height(), "edge profile");
    const bool row = axis == ProfileAxis::row;
    const int limit = row ? input.height() : input.width();
    if (index < 0 || index >= limit)
        throw InvalidInput(std::string(row ? "scanline " : "column ") + std::to_string(index) + " outside [0, " +
                           std::to_string(limit - 1) + "]");

    std::string out = "position,input_luma,trilinear_luma,manifold_luma\n";
    const int length = row ? input.width() : input.height();
    for (int p = 0; p < length; ++p) {
        const int x = row ? p : index;
        const int y = row ? index : p;
        out += std::to_string(p) + "," + format_value(input.luma()(y, x)) + "," +
               format_value(trilinear.luma()(y, x)) + "," + format_value(manifold.luma()(y, x)) + "\n";
    }
    return out;
}

Rgb8Image plane_to_gray(const Plane<float>& plane, float lo, float hi)
{
    if (!(hi > lo))
        throw InvalidInput("plane_to_gray: empty value range");
    const float inv = 1.0f / (hi - lo);
    Rgb8Image img(int(plane.cols()), int(plane.rows()));
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const std::uint8_t g = to_byte((plane(y, x) - lo) * inv);
            img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = g;
        }
    return img;
}

EdgeDumps edge_dumps(const EdgeField<float>& field)
{
    const float peak = field.magnitude.maxCoeff();
    const float pi = std::numbers::pi_v<float>;
    return {plane_to_gray(field.magnitude, 0.0f, peak > 0.0f ? peak : 1.0f), plane_to_gray(field.theta, -pi, pi),
            plane_to_gray(field.uncertainty, 0.0f, 1.0f)};
}

} // namespace lutgrid
