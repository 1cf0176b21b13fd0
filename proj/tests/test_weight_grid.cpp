#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <lutgrid/grid_io.hpp>
#include <lutgrid/png_io.hpp>
#include <lutgrid/weight_grid.hpp>

using namespace lutgrid;

namespace {

WeightGrid<float> random_grid(GridDims dims, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    return WeightGrid<float>(dims, Eigen::VectorXf::NullaryExpr(dims.count(), [&](Eigen::Index) { return u(rng); }));
}

std::string format_error_of(const std::vector<std::uint8_t>& bytes)
{
    try {
        decode_grid(bytes);
    } catch (const FormatError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("init_grid")
{
    const auto g = init_grid<float>({3, 4, 5}, 0.5f);
    CHECK((g.values().array() == 0.5f).all());
    CHECK(g.values().size() == 60);
    CHECK((init_grid<float>({2, 2, 2}, 0.0f).values().array() == 0.0f).all());
    CHECK(GridDims{}.count() == 221184);
    CHECK(init_grid<float>(GridDims{}, 0.5f).values().size() == 221184);
    CHECK_THROWS_AS(init_grid<float>({2, 2, 2}, 1.5f), InvalidInput);
    CHECK_THROWS_AS(init_grid<float>({2, 2, 2}, -0.1f), InvalidInput);
    CHECK_THROWS_AS(init_grid<float>({1, 2, 2}, 0.5f), InvalidInput);
}

TEST_CASE("index order puts k fastest")
{
    const GridDims d{3, 4, 5};
    CHECK(d.index(0, 0, 1) == 1);
    CHECK(d.index(0, 1, 0) == 5);
    CHECK(d.index(1, 0, 0) == 20);
    auto g = init_grid<float>(d, 0.0f);
    g(2, 3, 4) = 0.25f;
    CHECK(g.values()[d.count() - 1] == 0.25f);
}

TEST_CASE("node anchoring")
{
    CHECK(node_to_pixel<float>(0, 8, 64) == 0.0f);
    CHECK(node_to_pixel<float>(7, 8, 64) == 63.0f);
    CHECK(node_to_pixel<float>(1, 8, 64) == 9.0f);
    CHECK(pixel_to_grid<float>(63.0f, 8, 64) == 7.0f);
    CHECK(pixel_to_grid<float>(9.0f, 8, 64) == doctest::Approx(1.0));
}

TEST_CASE("sample_nodes examples")
{
    const auto flat = test::constant_image<float>(10, 7, Rgb<float>(0.1f, 0.5f, 0.9f));
    const auto fs = sample_nodes(flat, 4, 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK((fs.at(i, j) - Rgb<float>(0.1f, 0.5f, 0.9f)).norm() < 1e-7f);

    const auto img = test::random_image<float>(13, 9, 21);
    const auto s = sample_nodes(img, 5, 4);
    CHECK(s.at(0, 0) == img.rgb(0, 0));
    CHECK(s.at(4, 3) == img.rgb(12, 8));

    const int w = 50;
    const auto ramp = LinearImage<float>::generate(w, 6, [&](int x, int) {
        return Rgb<float>(float(x) / float(w - 1), 0.0f, 0.0f);
    });
    const auto rs = sample_nodes(ramp, 8, 3);
    for (int i = 0; i < 8; ++i)
        CHECK(std::abs(rs.at(i, 1)[0] - float(i) / 7.0f) < 1e-6f);
    CHECK_THROWS_AS(sample_nodes(test::constant_image<float>(1, 5, Rgb<float>::Zero()), 2, 2), InvalidInput);
}

TEST_CASE("sample_nodes commutes with affine maps")
{
    const auto img = test::random_image<float>(23, 17, 22, 0.1, 0.6);
    const float a = 1.3f, b = 0.05f;
    const auto mapped = LinearImage<float>::generate(23, 17, [&](int x, int y) {
        return Rgb<float>((a * img.rgb(x, y).array() + b).matrix());
    });
    const auto s0 = sample_nodes(img, 6, 5);
    const auto s1 = sample_nodes(mapped, 6, 5);
    CHECK((s1.samples.array() - (a * s0.samples.array() + b)).abs().maxCoeff() < 1e-6f);
}

TEST_CASE("BGW1 fp32 layout and round trip")
{
    const auto small = init_grid<float>({2, 2, 2}, 0.25f);
    const auto bytes = encode_grid(small);
    CHECK(bytes.size() == 49);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "BGW1");
    CHECK(bytes[4] == 0);
    CHECK(bytes[5] == 2);
    CHECK(bytes[6] == 0);
    // 0.25f == 0x3e800000, little endian
    CHECK(bytes[17] == 0x00);
    CHECK(bytes[20] == 0x3e);

    const auto dir = test::scratch("weight_grid");
    const auto grid = random_grid({5, 4, 3}, 23);
    write_grid(grid, dir / "a.bgw");
    const auto back = read_grid(dir / "a.bgw");
    CHECK(back.dims() == grid.dims());
    CHECK((back.values().array() == grid.values().array()).all());
    write_grid(back, dir / "b.bgw");
    CHECK(read_file_bytes(dir / "a.bgw") == read_file_bytes(dir / "b.bgw"));
}

TEST_CASE("BGW1 format errors name the field")
{
    auto bytes = encode_grid(init_grid<float>({2, 2, 2}, 0.5f));
    auto bad = bytes;
    bad[3] = '2';
    CHECK(format_error_of(bad).find("bad magic") != std::string::npos);
    bad = bytes;
    bad[4] = 7;
    CHECK(format_error_of(bad).find("unknown dtype") != std::string::npos);
    bad = bytes;
    bad.resize(10);
    CHECK(format_error_of(bad).find("truncated header") != std::string::npos);
    bad = bytes;
    bad.pop_back();
    CHECK(format_error_of(bad).find("truncated payload") != std::string::npos);
    bad = bytes;
    bad.push_back(0);
    CHECK(format_error_of(bad).find("trailing bytes") != std::string::npos);
    bad = bytes;
    bad[5] = 1;
    CHECK(format_error_of(bad).find("dimensions") != std::string::npos);
    bad = bytes;
    bad[20] = 0x7f;  // 0.5f -> a huge value
    CHECK(format_error_of(bad).find("outside [0,1]") != std::string::npos);

    CHECK_THROWS_AS(read_grid(test::scratch("weight_grid") / "missing.bgw"), IoError);
}
