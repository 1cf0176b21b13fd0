#ifndef LUTGRID_TEST_SUPPORT_HPP
#define LUTGRID_TEST_SUPPORT_HPP

#include <lutgrid/image.hpp>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

namespace test {

// Scratch directory from LUTGRID_TEST_TMP (set by ctest), else the system temp dir.
inline std::filesystem::path scratch(const std::string& name)
{
    const char* env = std::getenv("LUTGRID_TEST_TMP");
    std::filesystem::path dir = env ? std::filesystem::path(env) : std::filesystem::temp_directory_path() / "lutgrid";
    dir /= name;
    std::filesystem::create_directories(dir);
    return dir;
}

template <typename Scalar = float>
lutgrid::LinearImage<Scalar> random_image(int w, int h, std::uint64_t seed, double lo = 0.0, double hi = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    return lutgrid::LinearImage<Scalar>::generate(w, h, [&](int, int) {
        return lutgrid::Rgb<Scalar>(Scalar(u(rng)), Scalar(u(rng)), Scalar(u(rng)));
    });
}

template <typename Scalar = float>
lutgrid::LinearImage<Scalar> constant_image(int w, int h, lutgrid::Rgb<Scalar> v)
{
    return lutgrid::LinearImage<Scalar>::generate(w, h, [&](int, int) { return v; });
}

template <typename Scalar>
double max_abs_diff(const lutgrid::LinearImage<Scalar>& a, const lutgrid::LinearImage<Scalar>& b)
{
    double m = 0.0;
    for (int c = 0; c < 3; ++c)
        m = std::max(m, double((a.channel(c) - b.channel(c)).abs().maxCoeff()));
    return m;
}

} // namespace test

#endif // LUTGRID_TEST_SUPPORT_HPP
