#ifndef LUTGRID_METRICS_HPP
#define LUTGRID_METRICS_HPP

#include <lutgrid/image.hpp>

#include <cmath>

namespace lutgrid {

inline constexpr double kPsnrCap = 99.0;

struct MetricReport
{
    double psnr_db = 0.0;
    double ssim = 0.0;
};

namespace detail {

inline double psnr_from_mse(double mse)
{
    if (mse <= 0.0)
        return kPsnrCap;
    return std::min(kPsnrCap, 10.0 * std::log10(1.0 / mse));
}

inline Plane<double> luma_plane_u8(const Rgb8Image& img)
{
    Plane<double> out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out(y, x) = (0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2)) / 255.0;
    return out;
}

// Separable Gaussian blur with mirrored borders (edge sample repeated).
inline Plane<double> gaussian_blur(const Plane<double>& src, const Eigen::VectorXd& kernel)
{
    const int h = static_cast<int>(src.rows());
    const int w = static_cast<int>(src.cols());
    const int radius = static_cast<int>(kernel.size() / 2);
    auto mirror = [](int i, int n) {
        while (i < 0 || i >= n)
            i = i < 0 ? -i - 1 : 2 * n - i - 1;
        return i;
    };

    Plane<double> tmp(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * src(y, mirror(x + k, w));
            tmp(y, x) = acc;
        }
    Plane<double> out(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp(mirror(y + k, h), x);
            out(y, x) = acc;
        }
    return out;
}

inline double ssim_planes(const Plane<double>& a, const Plane<double>& b)
{
    constexpr int kWindow = 11;
    constexpr double kSigma = 1.5;
    constexpr double kC1 = 0.01 * 0.01;
    constexpr double kC2 = 0.03 * 0.03;

    require_same_size(static_cast<int>(a.cols()), static_cast<int>(a.rows()), static_cast<int>(b.cols()),
                      static_cast<int>(b.rows()), "ssim");
    if (a.rows() < kWindow || a.cols() < kWindow)
        throw InvalidInput("ssim: image smaller than the 11x11 window");

    Eigen::VectorXd kernel(kWindow);
    for (int i = 0; i < kWindow; ++i) {
        const double d = i - kWindow / 2;
        kernel[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    }
    kernel /= kernel.sum();

    const Plane<double> mu_a = gaussian_blur(a, kernel);
    const Plane<double> mu_b = gaussian_blur(b, kernel);
    const Plane<double> var_a = (gaussian_blur(a * a, kernel) - mu_a * mu_a).cwiseMax(0.0);
    const Plane<double> var_b = (gaussian_blur(b * b, kernel) - mu_b * mu_b).cwiseMax(0.0);
    const Plane<double> cov = gaussian_blur(a * b, kernel) - mu_a * mu_b;

    const Plane<double> num = (2.0 * mu_a * mu_b + kC1) * (2.0 * cov + kC2);
    const Plane<double> den = (mu_a * mu_a + mu_b * mu_b + kC1) * (var_a + var_b + kC2);
    return (num / den).mean();
}

} // namespace detail

/// PSNR over all channels and pixels of two linear images, values in [0,1].
/// Identical images report the 99 dB cap.
template <typename Scalar>
double psnr(const LinearImage<Scalar>& a, const LinearImage<Scalar>& b)
{
    require_same_size(a.width(), a.height(), b.width(), b.height(), "psnr");
    double sum = 0.0;
    for (int c = 0; c < 3; ++c)
        sum += (a.channel(c).template cast<double>() - b.channel(c).template cast<double>()).square().sum();
    return detail::psnr_from_mse(sum / (3.0 * a.width() * a.height()));
}

/// PSNR of 8-bit images on the [0,1] scale (codes divided by 255).
inline double psnr(const Rgb8Image& a, const Rgb8Image& b)
{
    require_same_size(a.width, a.height, b.width, b.height, "psnr");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = (double(a.pixels[i]) - double(b.pixels[i])) / 255.0;
        sum += d * d;
    }
    return detail::psnr_from_mse(sum / static_cast<double>(a.pixels.size()));
}

/// Mean SSIM of the luma planes (11x11 Gaussian window, sigma 1.5).
template <typename Scalar>
double ssim(const LinearImage<Scalar>& a, const LinearImage<Scalar>& b)
{
    return detail::ssim_planes(a.luma().template cast<double>(), b.luma().template cast<double>());
}

/// SSIM on 8-bit images; the grayscale operand is the luma of the encoded values.
inline double ssim(const Rgb8Image& a, const Rgb8Image& b)
{
    return detail::ssim_planes(detail::luma_plane_u8(a), detail::luma_plane_u8(b));
}

inline MetricReport compare_images(const Rgb8Image& a, const Rgb8Image& b)
{
    return {psnr(a, b), ssim(a, b)};
}

} // namespace lutgrid

#endif // LUTGRID_METRICS_HPP
