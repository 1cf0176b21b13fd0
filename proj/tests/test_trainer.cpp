#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <lutgrid/degrade.hpp>
#include <lutgrid/trainer.hpp>

using namespace lutgrid;

namespace {

FusionModel<double> random_model(GridDims dims, int lut_size, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    auto m = make_model<double>(dims, lut_size, 0.0);
    m.grid.values() = Eigen::VectorXd::NullaryExpr(dims.count(), [&](Eigen::Index) { return u(rng); });
    m.lut.entries() = Eigen::VectorXd::NullaryExpr(m.lut.entries().size(), [&](Eigen::Index) { return u(rng); });
    return m;
}

std::vector<std::pair<LinearImage<float>, LinearImage<float>>> hazy_scene(int size, std::uint64_t seed)
{
    const auto clean = make_fixture<float>(FixtureKind::scene, size, size, {.seed = seed});
    return {{apply_haze(clean, HazeParams{}), clean}};
}

} // namespace

TEST_CASE("l1 and color loss examples")
{
    const auto a = test::constant_image<double>(6, 5, Rgb<double>::Constant(0.5));
    const auto b = test::constant_image<double>(6, 5, Rgb<double>::Constant(0.6));
    CHECK(l1_loss(a, b) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(l1_loss(a, a) == 0.0);
    CHECK(color_loss(a, a) == 0.0);

    const auto black = test::constant_image<double>(4, 4, Rgb<double>::Zero());
    const auto white = test::constant_image<double>(4, 4, Rgb<double>::Ones());
    CHECK(color_loss(black, white) == doctest::Approx(100.0).epsilon(1e-3));

    LinearImage<double> one(4, 4), other(4, 4);
    other.set_rgb(1, 2, Rgb<double>(0.3, 0.0, 0.0));
    CHECK(l1_loss(one, other) == doctest::Approx(0.3 / 48).epsilon(1e-12));
    CHECK_THROWS_AS(l1_loss(one, black.crop(0, 0, 3, 4)), InvalidInput);
}

TEST_CASE("analytic gradients match central differences")
{
    const auto img = test::random_image<double>(14, 12, 81, 0.05, 0.95);
    const auto tgt = test::random_image<double>(14, 12, 82, 0.05, 0.95);
    const LossWeights weights{1.0, 0.0, 0.1, 0.01, {1.0, 1.0}};
    for (Sampler s : {Sampler::trilinear, Sampler::manifold}) {
        auto m = random_model({4, 3, 3}, 5, 83);
        m.params.tau = 0.3;
        const auto pair = prepare_pair(m, img, tgt, s);
        const auto base = loss_and_gradients(m, pair, weights);
        const double h = 1e-6;
        int compared = 0;
        auto check = [&](double& slot, double analytic) {
            const double keep = slot;
            auto loss_at = [&](double v) {
                slot = v;
                return loss_and_gradients(m, pair, weights, 1, false).loss.total;
            };
            const double fp = loss_at(keep + h), f0 = loss_at(keep), fm = loss_at(keep - h);
            slot = keep;
            // skip parameters sitting on a kink of |.|
            if (std::abs((fp - f0) - (f0 - fm)) > 1e-3 * std::abs(fp - fm) + 1e-13)
                return;
            const double fd = (fp - fm) / (2 * h);
            CHECK(std::abs(analytic - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
            ++compared;
        };
        for (Eigen::Index n = 0; n < m.grid.values().size(); ++n)
            check(m.grid.values()[n], base.grads.d_grid[n]);
        for (Eigen::Index n = 0; n < m.lut.entries().size(); n += 7)
            check(m.lut.entries()[n], base.grads.d_lut[n]);
        CHECK(compared > 40);
    }
}

TEST_CASE("gradients are independent of thread count and of caching")
{
    const auto img = test::random_image<float>(20, 16, 84);
    const auto tgt = test::random_image<float>(20, 16, 85);
    const auto m = random_model({5, 4, 4}, 9, 86).cast<float>();
    const auto pair = prepare_pair(m, img, tgt, Sampler::manifold, 1);
    const auto one = loss_and_gradients(m, pair, LossWeights{}, 1);
    const auto three = loss_and_gradients(m, pair, LossWeights{}, 3);
    CHECK(one.loss.total == three.loss.total);
    CHECK(one.grads.d_grid == three.grads.d_grid);
    CHECK(one.grads.d_lut == three.grads.d_lut);

    const auto direct = loss_and_gradients(m, img, tgt, Sampler::manifold);
    CHECK(direct.loss.total == one.loss.total);
    CHECK(direct.grads.d_grid == one.grads.d_grid);

    const auto recomputed_pred = enhance_manifold(m, img);
    CHECK(test::max_abs_diff(recomputed_pred, one.prediction) == 0.0);
    CHECK(one.loss.l1 == doctest::Approx(l1_loss(recomputed_pred, tgt)).epsilon(1e-9));
    CHECK(one.loss.color == doctest::Approx(color_loss(recomputed_pred, tgt)).epsilon(1e-9));
    CHECK(one.loss.total ==
          doctest::Approx(one.loss.l1 + 0.1 * one.loss.color + 0.01 * one.loss.tv).epsilon(1e-12));

    auto other = m;
    other.grid = init_grid<float>({3, 3, 3}, 0.5f);
    CHECK_THROWS_AS(loss_and_gradients(other, pair, LossWeights{}), InvalidInput);
}

TEST_CASE("adam examples")
{
    AdamConfig cfg;
    cfg.lr = 0.1;
    AdamState<double> st;
    Eigen::VectorXd p = (Eigen::VectorXd(3) << 0.5, 0.05, 0.5).finished();
    const Eigen::VectorXd g = (Eigen::VectorXd(3) << 1.0, 1.0, -2.0).finished();
    adam_step<double>(p, g, st, cfg);
    CHECK(p[0] == doctest::Approx(0.4).epsilon(1e-7));
    CHECK(p[1] == 0.0);  // projected
    CHECK(p[2] == doctest::Approx(0.6).epsilon(1e-7));
    adam_step<double>(p, g, st, cfg);
    CHECK(st.step == 2);
    CHECK(p[0] == doctest::Approx(0.3).epsilon(1e-7));
    CHECK(p[2] == doctest::Approx(0.7).epsilon(1e-7));

    // zero gradient from a fresh state leaves parameters untouched
    AdamState<double> fresh;
    Eigen::VectorXd q = Eigen::VectorXd::Constant(4, 0.3);
    adam_step<double>(q, Eigen::VectorXd::Zero(4), fresh, cfg);
    CHECK((q.array() == 0.3).all());
    CHECK_THROWS_AS(adam_step<double>(q, Eigen::VectorXd::Zero(3), fresh, cfg), InvalidInput);
}

TEST_CASE("cosine schedule")
{
    CHECK(cosine_lr(0.01, 0, 100) == doctest::Approx(0.01));
    CHECK(cosine_lr(0.01, 50, 100) == doctest::Approx(0.005));
    CHECK(cosine_lr(0.01, 100, 100) == doctest::Approx(0.0));
    for (int e = 0; e < 99; ++e)
        CHECK(cosine_lr(0.01, e + 1, 100) < cosine_lr(0.01, e, 100));
}

TEST_CASE("zero epochs returns the initial model and one log row")
{
    const auto pairs = hazy_scene(24, 1);
    const auto init = make_model<float>({4, 4, 4}, 9);
    FitOptions opt;
    opt.epochs = 0;
    const auto r = fit(init, pairs, opt);
    REQUIRE(r.log.size() == 1);
    CHECK(r.log[0].epoch == 0);
    CHECK(r.model.grid.values() == init.grid.values());
    CHECK(r.model.lut.entries() == init.lut.entries());
    const auto pred = enhance_manifold(init, pairs[0].first);
    CHECK(r.log[0].psnr == doctest::Approx(psnr(linear_to_srgb(pred), linear_to_srgb(pairs[0].second))));

    opt.epochs = -1;
    CHECK_THROWS_AS(fit(init, pairs, opt), InvalidInput);
    CHECK_THROWS_AS(fit(init, {}, FitOptions{}), InvalidInput);
}

TEST_CASE("identical pair at the identity stays put")
{
    const auto clean = make_fixture<float>(FixtureKind::scene, 24, 24, {.seed = 2});
    const auto init = make_model<float>({4, 4, 4}, 9, 0.0f);
    for (double lr : {1e-4, 1e-2}) {
        FitOptions opt;
        opt.epochs = 5;
        opt.lr = lr;
        const auto r = fit(init, {{clean, clean}}, opt);
        CHECK(r.log.size() == 6);
        for (const auto& row : r.log) {
            CHECK(row.loss.total < 1e-4);
            CHECK(row.psnr >= 50.0);
        }
        CHECK((r.model.lut.entries() - init.lut.entries()).cwiseAbs().maxCoeff() < 1e-6f);
        CHECK(r.model.grid.values().cwiseAbs().maxCoeff() < 1e-6f);
    }

    const auto pair = prepare_pair(init, clean, clean, Sampler::manifold);
    const auto g = loss_and_gradients(init, pair, LossWeights{});
    CHECK(g.grads.d_lut.cwiseAbs().maxCoeff() == 0.0f);
    CHECK(g.grads.d_grid.cwiseAbs().maxCoeff() == 0.0f);
}

TEST_CASE("training lowers the loss")
{
    const auto pairs = hazy_scene(32, 3);
    FitOptions opt;
    opt.epochs = 60;
    opt.lr = 5e-3;
    opt.weights.tv = 0.0;
    const auto r = fit(make_model<float>({6, 6, 6}, 9), pairs, opt);
    REQUIRE(r.log.size() == 61);
    int non_increasing = 0;
    for (std::size_t e = 0; e + 1 < r.log.size(); ++e) {
        non_increasing += r.log[e + 1].loss.total <= r.log[e].loss.total ? 1 : 0;
        CHECK(r.log[e].lr == doctest::Approx(cosine_lr(5e-3, int(e), 60)));
    }
    CHECK(non_increasing >= 57);
    CHECK(r.log.back().loss.total < 0.8 * r.log.front().loss.total);
    CHECK(r.log.back().psnr > r.log.front().psnr);
    CHECK(r.log.back().lr == 0.0);
    CHECK(r.log.back().epoch == 60);
    CHECK((r.model.grid.values().array() >= 0.0f).all());
    CHECK((r.model.grid.values().array() <= 1.0f).all());
}

TEST_CASE("fit is deterministic, including random crops")
{
    const auto pairs = hazy_scene(32, 4);
    FitOptions opt;
    opt.epochs = 6;
    opt.lr = 1e-2;
    opt.crop = 16;
    opt.seed = 9;
    const auto init = make_model<float>({4, 4, 4}, 5);
    const auto a = fit(init, pairs, opt);
    opt.threads = 3;
    const auto b = fit(init, pairs, opt);
    CHECK(a.model.grid.values() == b.model.grid.values());
    CHECK(a.model.lut.entries() == b.model.lut.entries());
    opt.seed = 10;
    const auto c = fit(init, pairs, opt);
    CHECK(!(a.model.grid.values() == c.model.grid.values()));
}
