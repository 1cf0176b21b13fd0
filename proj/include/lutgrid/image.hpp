#ifndef LUTGRID_IMAGE_HPP
#define LUTGRID_IMAGE_HPP

#include <lutgrid/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace lutgrid {

/// Row-major single-channel plane indexed (y, x).
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Rgb = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
inline constexpr Scalar kLumaR = Scalar(0.299);
template <typename Scalar>
inline constexpr Scalar kLumaG = Scalar(0.587);
template <typename Scalar>
inline constexpr Scalar kLumaB = Scalar(0.114);

template <typename Scalar>
inline Scalar luma_of(const Rgb<Scalar>& rgb)
{
    return kLumaR<Scalar> * rgb[0] + kLumaG<Scalar> * rgb[1] + kLumaB<Scalar> * rgb[2];
}

template <typename Scalar>
inline Scalar clamp01(Scalar v)
{
    return std::clamp(v, Scalar(0), Scalar(1));
}

/// Interleaved 8-bit RGB image as stored in PNG files.
struct Rgb8Image
{
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    Rgb8Image() = default;
    Rgb8Image(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3, 0) {}

    std::uint8_t& at(int x, int y, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    std::uint8_t at(int x, int y, int c) const { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

    bool operator==(const Rgb8Image&) const = default;
};

/// Planar linear-light RGB image with its derived luminance plane.
///
/// Channel values are kept in [0,1] and luma always equals
/// 0.299 r + 0.587 g + 0.114 b; every mutator preserves both.
template <typename Scalar = float>
class LinearImage
{
public:
    using PlaneType = Plane<Scalar>;

    LinearImage() = default;

    LinearImage(int width, int height)
    {
        if (width < 1 || height < 1)
            throw InvalidInput("image dimensions must be positive, got " + std::to_string(width) + "x" +
                               std::to_string(height));
        for (auto& c : channels_)
            c = PlaneType::Zero(height, width);
        luma_ = PlaneType::Zero(height, width);
    }

    /// Builds an image from three planes of equal shape; values are clamped.
    static LinearImage from_planes(const PlaneType& r, const PlaneType& g, const PlaneType& b)
    {
        if (r.rows() != g.rows() || r.rows() != b.rows() || r.cols() != g.cols() || r.cols() != b.cols())
            throw InvalidInput("channel planes differ in shape");
        LinearImage img(static_cast<int>(r.cols()), static_cast<int>(r.rows()));
        img.channels_[0] = r.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
        img.channels_[1] = g.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
        img.channels_[2] = b.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
        img.refresh_luma();
        return img;
    }

    template <typename Fn>
    static LinearImage generate(int width, int height, Fn&& fn)
    {
        LinearImage img(width, height);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                img.set_rgb(x, y, fn(x, y));
        return img;
    }

    int width() const { return static_cast<int>(luma_.cols()); }
    int height() const { return static_cast<int>(luma_.rows()); }
    bool empty() const { return luma_.size() == 0; }

    const PlaneType& channel(int c) const { return channels_[c]; }
    const PlaneType& luma() const { return luma_; }

    Rgb<Scalar> rgb(int x, int y) const
    {
        return {channels_[0](y, x), channels_[1](y, x), channels_[2](y, x)};
    }

    void set_rgb(int x, int y, const Rgb<Scalar>& v)
    {
        const Rgb<Scalar> c(clamp01(v[0]), clamp01(v[1]), clamp01(v[2]));
        channels_[0](y, x) = c[0];
        channels_[1](y, x) = c[1];
        channels_[2](y, x) = c[2];
        luma_(y, x) = luma_of(c);
    }

    /// Copies a rectangular region.
    LinearImage crop(int x0, int y0, int w, int h) const
    {
        if (x0 < 0 || y0 < 0 || w < 1 || h < 1 || x0 + w > width() || y0 + h > height())
            throw InvalidInput("crop rectangle outside image");
        LinearImage out(w, h);
        for (int c = 0; c < 3; ++c)
            out.channels_[c] = channels_[c].block(y0, x0, h, w);
        out.luma_ = luma_.block(y0, x0, h, w);
        return out;
    }

    template <typename Other>
    LinearImage<Other> cast() const
    {
        LinearImage<Other> out(width(), height());
        for (int y = 0; y < height(); ++y)
            for (int x = 0; x < width(); ++x)
                out.set_rgb(x, y, rgb(x, y).template cast<Other>());
        return out;
    }

    bool operator==(const LinearImage& o) const
    {
        if (width() != o.width() || height() != o.height())
            return false;
        for (int c = 0; c < 3; ++c)
            if ((channels_[c] != o.channels_[c]).any())
                return false;
        return true;
    }

private:
    void refresh_luma()
    {
        luma_ = kLumaR<Scalar> * channels_[0] + kLumaG<Scalar> * channels_[1] + kLumaB<Scalar> * channels_[2];
    }

    PlaneType channels_[3];
    PlaneType luma_;
};

inline void require_same_size(int w0, int h0, int w1, int h1, const char* what)
{
    if (w0 != w1 || h0 != h1)
        throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(w0) + "x" +
                           std::to_string(h0) + " vs " + std::to_string(w1) + "x" + std::to_string(h1) + ")");
}

/// Bilinear sample of a plane at a continuous pixel position; positions are
/// clamped to the plane.
template <typename Scalar>
inline Scalar sample_bilinear(const Plane<Scalar>& plane, Scalar x, Scalar y)
{
    const int w = static_cast<int>(plane.cols());
    const int h = static_cast<int>(plane.rows());
    x = std::clamp(x, Scalar(0), Scalar(w - 1));
    y = std::clamp(y, Scalar(0), Scalar(h - 1));
    const int x0 = std::min(static_cast<int>(x), std::max(w - 2, 0));
    const int y0 = std::min(static_cast<int>(y), std::max(h - 2, 0));
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const Scalar fx = x - Scalar(x0);
    const Scalar fy = y - Scalar(y0);
    const Scalar top = (Scalar(1) - fx) * plane(y0, x0) + fx * plane(y0, x1);
    const Scalar bottom = (Scalar(1) - fx) * plane(y1, x0) + fx * plane(y1, x1);
    return (Scalar(1) - fy) * top + fy * bottom;
}

} // namespace lutgrid

#endif // LUTGRID_IMAGE_HPP
