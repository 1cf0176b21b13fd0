#ifndef LUTGRID_DEGRADE_HPP
#define LUTGRID_DEGRADE_HPP

#include <lutgrid/image.hpp>

#include <cmath>
#include <random>
#include <string_view>

namespace lutgrid {

enum class DepthMode
{
    uniform,          ///< d = 1
    horizontal_ramp,  ///< d = x / (width - 1)
};

/// Atmospheric scattering: I = J t + A (1 - t), t = exp(-beta_h d).
struct HazeParams
{
    Rgb<double> airlight{0.9, 0.9, 0.9};
    double beta_h = 0.6931471805599453;  // ln 2
    DepthMode depth = DepthMode::uniform;
    std::uint64_t seed = 0;
};

template <typename Scalar>
LinearImage<Scalar> apply_haze(const LinearImage<Scalar>& clean, const HazeParams& params)
{
    if (!(params.beta_h >= 0.0))
        throw InvalidInput("apply_haze: beta_h must be >= 0");
    if ((params.airlight.array() < 0.0).any() || (params.airlight.array() > 1.0).any())
        throw InvalidInput("apply_haze: airlight components must lie in [0,1]");
    const Rgb<Scalar> a = params.airlight.cast<Scalar>();
    const int w = clean.width();
    LinearImage<Scalar> out(w, clean.height());
    for (int y = 0; y < clean.height(); ++y)
        for (int x = 0; x < w; ++x) {
            const double d = params.depth == DepthMode::uniform ? 1.0 : (w > 1 ? double(x) / double(w - 1) : 0.0);
            const Scalar t = Scalar(std::exp(-params.beta_h * d));
            out.set_rgb(x, y, clean.rgb(x, y) * t + a * (Scalar(1) - t));
        }
    return out;
}

enum class FixtureKind
{
    step_edge,
    ramp,
    checker,
    scene,  ///< seeded colored rectangles over a gradient, for fitting
};

inline FixtureKind parse_fixture_kind(std::string_view name)
{
    if (name == "step-edge")
        return FixtureKind::step_edge;
    if (name == "ramp")
        return FixtureKind::ramp;
    if (name == "checker")
        return FixtureKind::checker;
    if (name == "scene")
        return FixtureKind::scene;
    throw InvalidInput("unknown fixture kind '" + std::string(name) + "' (expected step-edge|ramp|checker|scene)");
}

struct FixtureParams
{
    double low = 0.2;   ///< step-edge left / checker dark value
    double high = 0.8;  ///< step-edge right / checker light value
    int tile = 8;       ///< checker tile size
    std::uint64_t seed = 0;
};

/// Deterministic synthetic test images (gray unless kind == scene).
template <typename Scalar = float>
LinearImage<Scalar> make_fixture(FixtureKind kind, int width, int height, const FixtureParams& params = {})
{
    if (width < 8 || height < 8)
        throw InvalidInput("make_fixture: dimensions must be at least 8x8");
    auto gray = [](double v) { return Rgb<Scalar>::Constant(Scalar(v)); };

    switch (kind) {
    case FixtureKind::step_edge:
        return LinearImage<Scalar>::generate(width, height, [&](int x, int) {
            return gray(x < width / 2 ? params.low : params.high);
        });
    case FixtureKind::ramp:
        return LinearImage<Scalar>::generate(width, height, [&](int x, int) {
            return gray(double(x) / double(width - 1));
        });
    case FixtureKind::checker: {
        if (params.tile < 1)
            throw InvalidInput("make_fixture: checker tile must be >= 1");
        return LinearImage<Scalar>::generate(width, height, [&](int x, int y) {
            return gray(((x / params.tile) + (y / params.tile)) % 2 == 0 ? params.low : params.high);
        });
    }
    case FixtureKind::scene: {
        std::mt19937_64 rng(params.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        struct Rect
        {
            int x0, y0, x1, y1;
            Rgb<Scalar> color;
        };
        std::vector<Rect> rects;
        for (int r = 0; r < 12; ++r) {
            const int x0 = static_cast<int>(unit(rng) * width * 0.8);
            const int y0 = static_cast<int>(unit(rng) * height * 0.8);
            const int x1 = std::min(width, x0 + 4 + static_cast<int>(unit(rng) * width * 0.4));
            const int y1 = std::min(height, y0 + 4 + static_cast<int>(unit(rng) * height * 0.4));
            rects.push_back({x0, y0, x1, y1, Rgb<Scalar>(Scalar(unit(rng)), Scalar(unit(rng)), Scalar(unit(rng)))});
        }
        return LinearImage<Scalar>::generate(width, height, [&](int x, int y) {
            const double u = double(x) / double(width - 1);
            const double v = double(y) / double(height - 1);
            Rgb<Scalar> c(Scalar(0.15 + 0.5 * u), Scalar(0.2 + 0.4 * v), Scalar(0.6 - 0.4 * u * v));
            for (const auto& r : rects)
                if (x >= r.x0 && x < r.x1 && y >= r.y0 && y < r.y1)
                    c = r.color;
            return c;
        });
    }
    }
    throw InvalidInput("make_fixture: unknown fixture kind");
}

} // namespace lutgrid

#endif // LUTGRID_DEGRADE_HPP
