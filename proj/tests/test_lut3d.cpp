#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <lutgrid/lut3d.hpp>
#include <lutgrid/png_io.hpp>

#include <fstream>

using namespace lutgrid;

namespace {

void write_text(const std::filesystem::path& p, const std::string& s)
{
    std::ofstream(p, std::ios::binary) << s;
}

std::string parse_error_of(const std::filesystem::path& p)
{
    try {
        read_cube(p);
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("identity LUT layout")
{
    const auto two = identity_lut<float>(2);
    CHECK(two.vertex_count() == 8);
    for (int b = 0; b < 2; ++b)
        for (int g = 0; g < 2; ++g)
            for (int r = 0; r < 2; ++r)
                CHECK(two.entry(r, g, b) == Rgb<float>(float(r), float(g), float(b)));

    const auto lut = identity_lut<float>(33);
    CHECK(lut.entry(16, 16, 16) == Rgb<float>::Constant(0.5f));
    CHECK(lut.entries().size() == 107811);
    CHECK(lut.vertex_index(1, 2, 3) == 1 + 33 * 2 + 33 * 33 * 3);
    CHECK(lut.entry(7, 20, 31) == Rgb<float>(7.0f / 32, 20.0f / 32, 31.0f / 32));
    CHECK_THROWS_AS(identity_lut<float>(1), InvalidInput);
}

TEST_CASE("trilinear sampling examples")
{
    const auto id = identity_lut<float>(33);
    CHECK((trilinear_sample(id, Rgb<float>(0.3f, 0.6f, 0.9f)) - Rgb<float>(0.3f, 0.6f, 0.9f)).cwiseAbs().maxCoeff() <
          1e-6f);

    const Lut3D<float> flat(5, Eigen::VectorXf::Constant(3 * 125, 0.5f));
    CHECK((trilinear_sample(flat, Rgb<float>(0.13f, 0.77f, 0.41f)) - Rgb<float>::Constant(0.5f)).norm() < 1e-6f);

    Lut3D<float> hot(2, Eigen::VectorXf::Zero(24));
    hot.entry(hot.vertex_index(1, 1, 1)) = Rgb<float>(1, 0, 0);
    CHECK(trilinear_sample(hot, Rgb<float>(1, 1, 1)) == Rgb<float>(1, 0, 0));
    CHECK((trilinear_sample(hot, Rgb<float>(Rgb<float>::Constant(0.5f))) - Rgb<float>(0.125f, 0, 0)).norm() < 1e-7f);
}

TEST_CASE("vertex weights examples")
{
    auto weights_of = [](Rgb<float> rgb, int n) {
        std::vector<float> w(n * n * n, 0.0f);
        for (const auto& vw : trilinear_vertex_weights(rgb, n))
            w[vw.vertex] += vw.weight;
        return w;
    };
    const auto at_vertex = weights_of(Rgb<float>(0.25f, 0.5f, 1.0f), 5);
    int ones = 0, zeros = 0;
    for (float w : at_vertex) {
        ones += w == 1.0f;
        zeros += w == 0.0f;
    }
    CHECK(ones == 1);
    CHECK(zeros == 124);
    CHECK(at_vertex[1 + 5 * 2 + 25 * 4] == 1.0f);

    for (const auto& vw : trilinear_vertex_weights(Rgb<float>(Rgb<float>::Constant(0.5f)), 2))
        CHECK(vw.weight == 0.125f);

    const auto axis = weights_of(Rgb<float>(0.25f, 0, 0), 2);
    CHECK(axis[0] == 0.75f);
    CHECK(axis[1] == 0.25f);
    for (int v = 2; v < 8; ++v)
        CHECK(axis[v] == 0.0f);
}

TEST_CASE("sampling properties at random points")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    const auto id = identity_lut<float>(17);
    Lut3D<float> random(6, Eigen::VectorXf::NullaryExpr(3 * 216, [&](Eigen::Index) { return u(rng); }));
    for (int n = 0; n < 1000; ++n) {
        const Rgb<float> rgb(u(rng), u(rng), u(rng));
        CHECK((trilinear_sample(id, rgb) - rgb).cwiseAbs().maxCoeff() < 1e-6f);

        const auto weights = trilinear_vertex_weights(rgb, 6);
        float sum = 0.0f;
        Rgb<float> lo = Rgb<float>::Constant(2.0f), hi = Rgb<float>::Constant(-1.0f);
        for (const auto& vw : weights) {
            CHECK(vw.weight >= 0.0f);
            CHECK(vw.weight <= 1.0f);
            sum += vw.weight;
            lo = lo.cwiseMin(random.entry(vw.vertex));
            hi = hi.cwiseMax(random.entry(vw.vertex));
        }
        CHECK(sum == 1.0f);
        const Rgb<float> s = trilinear_sample(random, rgb);
        CHECK(((s - lo).array() >= -1e-6f).all());
        CHECK(((hi - s).array() >= -1e-6f).all());
    }
}

TEST_CASE("sampling is continuous across cell boundaries and clamps")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    Lut3D<float> random(5, Eigen::VectorXf::NullaryExpr(3 * 125, [&](Eigen::Index) { return u(rng); }));
    const float boundary = 0.5f;  // node 2 of 5
    for (int n = 0; n < 100; ++n) {
        const float g = u(rng), b = u(rng);
        const auto left = trilinear_sample(random, Rgb<float>(std::nextafter(boundary, 0.0f), g, b));
        const auto right = trilinear_sample(random, Rgb<float>(std::nextafter(boundary, 1.0f), g, b));
        CHECK((left - right).cwiseAbs().maxCoeff() < 1e-6f);
    }
    CHECK(trilinear_sample(random, Rgb<float>(-0.5f, 2.0f, 0.5f)) ==
          trilinear_sample(random, Rgb<float>(0.0f, 1.0f, 0.5f)));
}

TEST_CASE("cube round trip")
{
    const auto dir = test::scratch("lut3d");
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (int n : {2, 5}) {
        Lut3D<float> lut = identity_lut<float>(n);
        if (n == 5)
            lut.entries() = Eigen::VectorXf::NullaryExpr(3 * 125, [&](Eigen::Index) { return u(rng); });
        const auto path = dir / ("rt" + std::to_string(n) + ".cube");
        write_cube(lut, path);
        const auto back = read_cube(path);
        CHECK(back.size() == n);
        CHECK((back.entries() - lut.entries()).cwiseAbs().maxCoeff() < 1e-6f);
        CHECK(!std::filesystem::exists(path.string() + ".tmp"));
    }
}

TEST_CASE("cube reader accepts comments, blank lines and default domains")
{
    const auto p = test::scratch("lut3d") / "commented.cube";
    std::string text = "# comment\nTITLE \"x\"\n\nDOMAIN_MIN 0 0 0\nDOMAIN_MAX 1 1 1\nLUT_3D_SIZE 2\r\n";
    for (int v = 0; v < 8; ++v)
        text += std::to_string(v & 1) + " " + std::to_string((v >> 1) & 1) + " " + std::to_string(v >> 2) + "\n";
    write_text(p, text);
    const auto lut = read_cube(p);
    CHECK((lut.entries() - identity_lut<float>(2).entries()).norm() == 0.0f);
}

TEST_CASE("cube reader errors name the line")
{
    const auto dir = test::scratch("lut3d");
    std::string seven = "LUT_3D_SIZE 2\n";
    for (int v = 0; v < 7; ++v)
        seven += "0 0 0\n";
    write_text(dir / "seven.cube", seven);
    const std::string rows = parse_error_of(dir / "seven.cube");
    CHECK(rows.find("expected 8 rows") != std::string::npos);
    CHECK(rows.find(":1:") != std::string::npos);

    write_text(dir / "arity.cube", "LUT_3D_SIZE 2\n0 0 0\n0.5 0.5\n");
    const std::string arity = parse_error_of(dir / "arity.cube");
    CHECK(arity.find(":3:") != std::string::npos);
    CHECK(arity.find("expected 3 values") != std::string::npos);

    write_text(dir / "nosize.cube", "0 0 0\n");
    CHECK(parse_error_of(dir / "nosize.cube").find("LUT_3D_SIZE") != std::string::npos);
    write_text(dir / "empty.cube", "TITLE \"t\"\n");
    CHECK(parse_error_of(dir / "empty.cube").find("missing LUT_3D_SIZE") != std::string::npos);

    write_text(dir / "nan.cube", "LUT_3D_SIZE 2\n0 0 zero\n");
    CHECK(parse_error_of(dir / "nan.cube").find(":2:") != std::string::npos);

    CHECK_THROWS_AS(read_cube(dir / "does-not-exist.cube"), IoError);
}
