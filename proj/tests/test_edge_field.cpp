#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <lutgrid/degrade.hpp>
#include <lutgrid/edge_field.hpp>

using namespace lutgrid;

namespace {

LinearImage<double> gray_image(const Plane<double>& L)
{
    return LinearImage<double>::from_planes(L, L, L);
}

} // namespace

TEST_CASE("constant image has no edges")
{
    const auto f = compute_edge_field(test::constant_image<float>(9, 7, Rgb<float>::Constant(0.4f)));
    CHECK(f.magnitude.maxCoeff() == 0.0f);
    CHECK((f.uncertainty == 1.0f).all());
    const auto a = grid_alpha(f, {3, 3, 4});
    CHECK((a.alpha.array() == 1.0f).all());
    CHECK(segment_max_gradient(f, 0.0f, 0.0f, 8.0f, 6.0f) == 0.0f);
    CHECK_THROWS_AS(compute_edge_field(test::constant_image<float>(2, 7, Rgb<float>::Zero())), InvalidInput);
}

TEST_CASE("horizontal ramp")
{
    const int w = 21;
    const auto img = LinearImage<double>::generate(w, 9, [&](int x, int) {
        return Rgb<double>::Constant(double(x) / double(w - 1));
    });
    const auto unit = compute_edge_field(img);
    const auto raw = compute_edge_field(img, {10.0f, SobelScale::raw});
    for (int y = 0; y < 9; ++y)
        for (int x = 1; x < w - 1; ++x) {
            CHECK(unit.gx(y, x) == doctest::Approx(1.0 / (w - 1)).epsilon(1e-9));
            CHECK(raw.gx(y, x) == doctest::Approx(8.0 / (w - 1)).epsilon(1e-9));
            CHECK(std::abs(unit.gy(y, x)) < 1e-12);
            CHECK(std::abs(unit.theta(y, x)) < 1e-9);
        }
}

TEST_CASE("uncertainty and alpha scalar values")
{
    // e = 0.2 in the interior of a ramp of slope 0.2/px (unit scale)
    const auto ramp = LinearImage<double>::generate(6, 5, [](int x, int) { return Rgb<double>::Constant(0.2 * x); });
    const auto f = compute_edge_field(ramp);
    CHECK(f.magnitude(2, 2) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(f.uncertainty(2, 2) == doctest::Approx(0.1353352832366127).epsilon(1e-9));

    // slope 0.1/px gives G_grid = 0.1 at interior nodes
    const auto ramp2 = LinearImage<double>::generate(9, 9, [](int x, int) { return Rgb<double>::Constant(0.1 * x); });
    const auto f2 = compute_edge_field(ramp2);
    const auto a = grid_alpha(f2, {5, 5, 3});
    CHECK(a.alpha[GridDims{5, 5, 3}.index(2, 2, 1)] == doctest::Approx(0.36787944117144233).epsilon(1e-9));
}

TEST_CASE("field invariants on a random image")
{
    const auto img = test::random_image<double>(15, 12, 31);
    const auto f = compute_edge_field(img, {7.5f, SobelScale::unit}, 3);
    CHECK(((f.magnitude - (f.gx.square() + f.gy.square()).sqrt()).abs() < 1e-12).all());
    CHECK(((f.uncertainty - (-7.5 * f.magnitude).exp()).abs() < 1e-12).all());
    CHECK((f.uncertainty > 0.0).all());
    CHECK((f.uncertainty <= 1.0).all());
    CHECK(((f.theta - f.gy.binaryExpr(f.gx, [](double y, double x) { return std::atan2(y, x); })).abs() == 0.0).all());

    const auto single = compute_edge_field(img, {7.5f, SobelScale::unit}, 1);
    CHECK((single.magnitude == f.magnitude).all());

    const GridDims d{4, 3, 5};
    const auto a = grid_alpha(f, d);
    for (int i = 0; i < d.nx; ++i)
        for (int j = 0; j < d.ny; ++j) {
            const double px = node_to_pixel<double>(i, d.nx, 15);
            const double py = node_to_pixel<double>(j, d.ny, 12);
            const double expected = std::exp(-7.5 * sample_bilinear(f.magnitude, px, py));
            for (int k = 0; k < d.nl; ++k) {
                CHECK(std::abs(a.alpha[d.index(i, j, k)] - expected) < 1e-6);
                CHECK(a.alpha[d.index(i, j, k)] == a.alpha[d.index(i, j, 0)]);
            }
        }
}

TEST_CASE("transposition symmetry of the magnitude")
{
    const auto img = test::random_image<double>(11, 8, 32);
    Plane<double> L = img.luma();
    Plane<double> Lt = L.transpose();
    const auto f = compute_edge_field(gray_image(L));
    const auto ft = compute_edge_field(gray_image(Lt));
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 11; ++x)
            CHECK(std::abs(f.magnitude(y, x) - ft.magnitude(x, y)) < 1e-6);
}

TEST_CASE("step edge peak and segment queries")
{
    const auto step = make_fixture<double>(FixtureKind::step_edge, 16, 8, {0.0, 1.0});
    const auto unit = compute_edge_field(step);
    const auto raw = compute_edge_field(step, {10.0f, SobelScale::raw});
    // Columns 7 and 8 straddle the step: [-1 0 1] taps see 1 of the 0->1 jump.
    CHECK(unit.magnitude(4, 7) == doctest::Approx(0.5));
    CHECK(unit.magnitude(4, 8) == doctest::Approx(0.5));
    CHECK(raw.magnitude(4, 7) == doctest::Approx(4.0));
    CHECK(unit.magnitude(4, 6) == 0.0);
    CHECK(unit.magnitude(4, 9) == 0.0);

    // samples at x = 2, 4.75, 7.5, 10.25, 13
    CHECK(segment_max_gradient(unit, 2.0, 4.0, 13.0, 4.0, 4) == doctest::Approx(0.5));
    CHECK(segment_max_gradient(unit, 3.0, 4.0, 11.0, 4.0, 8) == doctest::Approx(0.5));
    CHECK(segment_max_gradient(unit, 7.5, 2.0, 7.5, 2.0) == doctest::Approx(0.5));
    CHECK(segment_max_gradient(unit, 2.0, 1.0, 5.0, 6.0) == 0.0);
}

TEST_CASE("segment query is endpoint symmetric")
{
    const auto f = compute_edge_field(test::random_image<float>(20, 20, 33));
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<float> u(0.0f, 19.0f);
    for (int n = 0; n < 500; ++n) {
        const float x0 = u(rng), y0 = u(rng), x1 = u(rng), y1 = u(rng);
        for (int steps : {1, 4, 7})
            CHECK(segment_max_gradient(f, x0, y0, x1, y1, steps) == segment_max_gradient(f, x1, y1, x0, y0, steps));
    }
}

TEST_CASE("uncertainty decreases with magnitude")
{
    const auto f = compute_edge_field(test::random_image<double>(14, 14, 35));
    for (int n = 0; n + 1 < f.magnitude.size(); ++n) {
        const double e0 = f.magnitude.data()[n], e1 = f.magnitude.data()[n + 1];
        const double u0 = f.uncertainty.data()[n], u1 = f.uncertainty.data()[n + 1];
        if (e0 < e1)
            CHECK(u0 > u1);
    }
}
