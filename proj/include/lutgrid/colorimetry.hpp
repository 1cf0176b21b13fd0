#ifndef LUTGRID_COLORIMETRY_HPP
#define LUTGRID_COLORIMETRY_HPP

#include <lutgrid/image.hpp>
#include <lutgrid/parallel.hpp>

#include <cmath>

namespace lutgrid {

/// sRGB transfer curve, encoded value in [0,1] to linear light.
template <typename Scalar>
inline Scalar srgb_decode(Scalar c)
{
    c = clamp01(c);
    if (c <= Scalar(0.04045))
        return c / Scalar(12.92);
    return std::pow((c + Scalar(0.055)) / Scalar(1.055), Scalar(2.4));
}

/// Inverse of srgb_decode.
template <typename Scalar>
inline Scalar srgb_encode(Scalar v)
{
    v = clamp01(v);
    if (v <= Scalar(0.0031308))
        return v * Scalar(12.92);
    return Scalar(1.055) * std::pow(v, Scalar(1) / Scalar(2.4)) - Scalar(0.055);
}

/// Linear value to an 8-bit sRGB code, rounding half up.
template <typename Scalar>
inline std::uint8_t srgb_encode_u8(Scalar v)
{
    const Scalar code = std::floor(srgb_encode(v) * Scalar(255) + Scalar(0.5));
    return static_cast<std::uint8_t>(std::clamp(code, Scalar(0), Scalar(255)));
}

template <typename Scalar = float>
LinearImage<Scalar> srgb_to_linear(const Rgb8Image& image, int threads = 1)
{
    if (image.width < 1 || image.height < 1)
        throw InvalidInput("srgb_to_linear: image has zero dimension");
    if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * 3)
        throw InvalidInput("srgb_to_linear: pixel buffer size does not match dimensions");

    Scalar table[256];
    for (int i = 0; i < 256; ++i)
        table[i] = srgb_decode(Scalar(i) / Scalar(255));

    LinearImage<Scalar> out(image.width, image.height);
    parallel_rows(image.height, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < image.width; ++x)
                out.set_rgb(x, y, {table[image.at(x, y, 0)], table[image.at(x, y, 1)], table[image.at(x, y, 2)]});
    });
    return out;
}

template <typename Scalar>
Rgb8Image linear_to_srgb(const LinearImage<Scalar>& image, int threads = 1)
{
    Rgb8Image out(image.width(), image.height());
    parallel_rows(image.height(), threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < image.width(); ++x)
                for (int c = 0; c < 3; ++c)
                    out.at(x, y, c) = srgb_encode_u8(image.channel(c)(y, x));
    });
    return out;
}

namespace detail {

template <typename Scalar>
inline const Eigen::Matrix<Scalar, 3, 3>& rgb_to_xyz_matrix()
{
    // sRGB primaries, D65 white.
    static const Eigen::Matrix<Scalar, 3, 3> m = (Eigen::Matrix<double, 3, 3>() <<
        0.4124564, 0.3575761, 0.1804375,
        0.2126729, 0.7151522, 0.0721750,
        0.0193339, 0.1191920, 0.9503041).finished().cast<Scalar>();
    return m;
}

// Reference white is the image of linear (1,1,1), so the neutral axis maps
// to a* = b* = 0.
template <typename Scalar>
inline const Rgb<Scalar>& d65_white()
{
    static const Rgb<Scalar> w = rgb_to_xyz_matrix<Scalar>().rowwise().sum();
    return w;
}

template <typename Scalar>
inline constexpr Scalar kLabDelta = Scalar(6) / Scalar(29);

template <typename Scalar>
inline Scalar lab_f(Scalar t)
{
    constexpr Scalar d = kLabDelta<Scalar>;
    if (t > d * d * d)
        return std::cbrt(t);
    return t / (Scalar(3) * d * d) + Scalar(4) / Scalar(29);
}

template <typename Scalar>
inline Scalar lab_f_derivative(Scalar t)
{
    constexpr Scalar d = kLabDelta<Scalar>;
    if (t > d * d * d) {
        const Scalar c = std::cbrt(t);
        return Scalar(1) / (Scalar(3) * c * c);
    }
    return Scalar(1) / (Scalar(3) * d * d);
}

} // namespace detail

/// Linear sRGB to CIELAB (D65). L in [0,100].
template <typename Scalar>
Rgb<Scalar> linear_to_lab(const Rgb<Scalar>& rgb)
{
    const Rgb<Scalar> xyz = detail::rgb_to_xyz_matrix<Scalar>() * rgb;
    const Rgb<Scalar>& white = detail::d65_white<Scalar>();
    const Scalar fx = detail::lab_f(xyz[0] / white[0]);
    const Scalar fy = detail::lab_f(xyz[1] / white[1]);
    const Scalar fz = detail::lab_f(xyz[2] / white[2]);
    return {Scalar(116) * fy - Scalar(16), Scalar(500) * (fx - fy), Scalar(200) * (fy - fz)};
}

/// d(L,a,b)/d(r,g,b); row = Lab component, column = rgb channel.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> linear_to_lab_jacobian(const Rgb<Scalar>& rgb)
{
    const auto& m = detail::rgb_to_xyz_matrix<Scalar>();
    const Rgb<Scalar>& white = detail::d65_white<Scalar>();
    const Rgb<Scalar> xyz = m * rgb;
    Rgb<Scalar> df;
    for (int i = 0; i < 3; ++i)
        df[i] = detail::lab_f_derivative(xyz[i] / white[i]) / white[i];

    Eigen::Matrix<Scalar, 3, 3> lab_from_f;
    lab_from_f << 0, 116, 0,
                  500, -500, 0,
                  0, 200, -200;
    return lab_from_f * df.asDiagonal() * m;
}

} // namespace lutgrid

#endif // LUTGRID_COLORIMETRY_HPP
