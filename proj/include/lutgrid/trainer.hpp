#ifndef LUTGRID_TRAINER_HPP
#define LUTGRID_TRAINER_HPP

#include <lutgrid/colorimetry.hpp>
#include <lutgrid/fusion.hpp>
#include <lutgrid/metrics.hpp>
#include <lutgrid/regularizer.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace lutgrid {

/// Loss term weights. The perceptual slot is kept for reporting and is always 0
/// here (no pretrained feature network).
struct LossWeights
{
    double l1 = 1.0;
    double perceptual = 0.0;
    double color = 0.1;
    double tv = 0.01;
    TvWeights tv_terms{1.0, 1.0};
};

struct LossBreakdown
{
    double l1 = 0.0;
    double color = 0.0;
    double tv = 0.0;
    double total = 0.0;
    LossWeights weights;
};

/// Residuals at or below these magnitudes get a zero subgradient, so rounding
/// noise around an exact reconstruction does not drive Adam (which rescales
/// any nonzero gradient to a step of about lr). Linear units and LAB units;
/// both sit well below one 8-bit code.
inline constexpr double kL1Deadband = 1e-6;
inline constexpr double kLabDeadband = 1e-4;

namespace detail {

inline double deadband_sign(double v, double band)
{
    return v > band ? 1.0 : (v < -band ? -1.0 : 0.0);
}

} // namespace detail

template <typename Scalar>
struct ParamGradients
{
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d_grid;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d_lut;
};

/// Mean absolute difference over all pixels and channels.
template <typename Scalar>
double l1_loss(const LinearImage<Scalar>& pred, const LinearImage<Scalar>& target)
{
    require_same_size(pred.width(), pred.height(), target.width(), target.height(), "l1_loss");
    double sum = 0.0;
    for (int c = 0; c < 3; ++c)
        sum += (pred.channel(c).template cast<double>() - target.channel(c).template cast<double>()).abs().sum();
    return sum / (3.0 * pred.width() * pred.height());
}

/// Mean over pixels of |dL| + |da| + |db| in CIELAB.
template <typename Scalar>
double color_loss(const LinearImage<Scalar>& pred, const LinearImage<Scalar>& target)
{
    require_same_size(pred.width(), pred.height(), target.width(), target.height(), "color_loss");
    double sum = 0.0;
    for (int y = 0; y < pred.height(); ++y)
        for (int x = 0; x < pred.width(); ++x) {
            const Rgb<double> d = linear_to_lab<double>(pred.rgb(x, y).template cast<double>()) -
                                  linear_to_lab<double>(target.rgb(x, y).template cast<double>());
            sum += d.cwiseAbs().sum();
        }
    return sum / (double(pred.width()) * pred.height());
}

/// An (input, target) pair with everything that depends only on the input
/// image cached: edge field, node samples, TV alpha and one plan per pixel.
/// Corner masks and weights never depend on W or the LUT, so they are
/// constants of differentiation.
template <typename Scalar>
struct TrainingPair
{
    LinearImage<Scalar> input;
    LinearImage<Scalar> target;
    Sampler sampler = Sampler::manifold;
    SamplingContext<Scalar> ctx;
    GridEdgeField<Scalar> alpha;
    std::vector<PixelPlan<Scalar>> plans;  ///< row-major
};

template <typename Scalar>
TrainingPair<Scalar> prepare_pair(const FusionModel<Scalar>& model, LinearImage<Scalar> input,
                                  LinearImage<Scalar> target, Sampler sampler, int threads = 1)
{
    require_same_size(input.width(), input.height(), target.width(), target.height(), "training pair");
    model.params.validate();
    TrainingPair<Scalar> pair;
    pair.sampler = sampler;
    const GridDims dims = model.grid.dims();
    // The edge field is needed for TV alpha even with the trilinear sampler.
    pair.ctx = make_context(input, dims, model.params, Sampler::manifold, threads);
    pair.alpha = grid_alpha(pair.ctx.field, dims);

    const int w = input.width();
    pair.plans.resize(static_cast<std::size_t>(w) * input.height());
    parallel_rows(input.height(), threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < w; ++x)
                pair.plans[static_cast<std::size_t>(y) * w + x] =
                    plan_pixel(sampler, dims, model.lut.size(), model.params, pair.ctx, x, y, input.rgb(x, y));
    });
    pair.input = std::move(input);
    pair.target = std::move(target);
    return pair;
}

template <typename Scalar>
struct LossResult
{
    LossBreakdown loss;
    ParamGradients<Scalar> grads;
    LinearImage<Scalar> prediction;
};

/// Composite loss and its analytic gradients with respect to W and the LUT.
///
/// Per pixel, out = sum_c w_c ((1 - W_c) lut(rgb) + W_c s_c), so
///   d out / d W_c   = w_c (s_c - lut(rgb))
///   d out / d LUT_v = (sum_c w_c (1 - W_c)) t_v
/// with t_v the trilinear vertex weights of the pixel color. The loss
/// gradient with respect to out is formed in parallel per pixel and then
/// scattered serially in pixel order, which keeps results independent of the
/// thread count.
template <typename Scalar>
LossResult<Scalar> loss_and_gradients(const FusionModel<Scalar>& model, const TrainingPair<Scalar>& pair,
                                      const LossWeights& weights, int threads = 1, bool want_gradients = true)
{
    if (!(model.grid.dims() == pair.alpha.dims))
        throw InvalidInput("loss_and_gradients: model grid does not match the prepared pair");
    const int w = pair.input.width();
    const int h = pair.input.height();
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const double inv_l1 = 1.0 / (3.0 * double(n));
    const double inv_px = 1.0 / double(n);

    LossResult<Scalar> result;
    result.prediction = LinearImage<Scalar>(w, h);
    std::vector<Rgb<double>> upstream(want_gradients ? n : 0);
    std::vector<double> row_l1(h, 0.0), row_color(h, 0.0);

    parallel_rows(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t p = static_cast<std::size_t>(y) * w + x;
                const Rgb<Scalar> raw = evaluate_plan(pair.plans[p], model.grid, model.lut);
                result.prediction.set_rgb(x, y, raw);
                const Rgb<double> out = result.prediction.rgb(x, y).template cast<double>();
                const Rgb<double> tgt = pair.target.rgb(x, y).template cast<double>();

                const Rgb<double> d = out - tgt;
                row_l1[y] += d.cwiseAbs().sum();
                const Rgb<double> dlab = linear_to_lab<double>(out) - linear_to_lab<double>(tgt);
                row_color[y] += dlab.cwiseAbs().sum();

                if (!want_gradients)
                    continue;
                const Rgb<double> sd = d.unaryExpr([](double v) { return detail::deadband_sign(v, kL1Deadband); });
                const Rgb<double> slab =
                    dlab.unaryExpr([](double v) { return detail::deadband_sign(v, kLabDeadband); });
                Rgb<double> g = weights.l1 * inv_l1 * sd +
                                weights.color * inv_px * (linear_to_lab_jacobian<double>(out).transpose() * slab);
                for (int c = 0; c < 3; ++c)
                    if (raw[c] < Scalar(0) || raw[c] > Scalar(1))
                        g[c] = 0.0;  // clamped channel
                upstream[p] = g;
            }
    });

    double l1 = 0.0, color = 0.0;
    for (int y = 0; y < h; ++y) {
        l1 += row_l1[y];
        color += row_color[y];
    }
    const TvBreakdown tv = tv_loss(model.grid, pair.alpha, weights.tv_terms);
    result.loss.l1 = l1 * inv_l1;
    result.loss.color = color * inv_px;
    result.loss.tv = tv.l_tv;
    result.loss.weights = weights;
    result.loss.total = weights.l1 * result.loss.l1 + weights.color * result.loss.color + weights.tv * result.loss.tv;

    if (!want_gradients)
        return result;

    Eigen::VectorXd d_grid = Eigen::VectorXd::Zero(model.grid.dims().count());
    Eigen::VectorXd d_lut = Eigen::VectorXd::Zero(3 * model.lut.vertex_count());
    const auto& grid = model.grid.values();
    for (std::size_t p = 0; p < n; ++p) {
        const Rgb<double>& g = upstream[p];
        if (g.isZero(0.0))
            continue;
        const auto& plan = pair.plans[p];
        const Rgb<double> lut_out = plan_lut_output(plan, model.lut).template cast<double>();
        double lut_share = 0.0;
        for (int c = 0; c < 8; ++c) {
            const double wc = double(plan.weight[c]);
            if (wc == 0.0)
                continue;
            const double wg = double(grid[plan.grid_index[c]]);
            d_grid[plan.grid_index[c]] += wc * g.dot(plan.sample[c].template cast<double>() - lut_out);
            lut_share += wc * (1.0 - wg);
        }
        for (const auto& vw : plan.lut_vertices) {
            if (vw.weight == Scalar(0))
                continue;
            d_lut.template segment<3>(3 * Eigen::Index(vw.vertex)) += (lut_share * double(vw.weight)) * g;
        }
    }
    d_grid += weights.tv * tv_gradient(model.grid, pair.alpha, weights.tv_terms).template cast<double>();

    result.grads.d_grid = d_grid.cast<Scalar>();
    result.grads.d_lut = d_lut.cast<Scalar>();
    return result;
}

/// Convenience form over an uncached image pair.
template <typename Scalar>
LossResult<Scalar> loss_and_gradients(const FusionModel<Scalar>& model, const LinearImage<Scalar>& image,
                                      const LinearImage<Scalar>& target, Sampler sampler,
                                      const LossWeights& weights = {}, int threads = 1)
{
    return loss_and_gradients(model, prepare_pair(model, image, target, sampler, threads), weights, threads);
}

struct AdamConfig
{
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double lower = 0.0;  ///< parameters are projected onto [lower, upper] after each step
    double upper = 1.0;
};

template <typename Scalar>
struct AdamState
{
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> m;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v;
    long step = 0;
};

/// One bias-corrected Adam update followed by projection onto the box.
template <typename Scalar>
void adam_step(Eigen::Ref<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> params,
               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& grads, AdamState<Scalar>& state,
               const AdamConfig& config)
{
    if (params.size() != grads.size())
        throw InvalidInput("adam_step: parameter and gradient sizes differ");
    if (state.step == 0) {
        state.m = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(params.size());
        state.v = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(params.size());
    } else if (state.m.size() != params.size()) {
        throw InvalidInput("adam_step: optimizer state does not match parameter count");
    }
    ++state.step;
    const Scalar b1 = Scalar(config.beta1);
    const Scalar b2 = Scalar(config.beta2);
    state.m = b1 * state.m + (Scalar(1) - b1) * grads;
    state.v = b2 * state.v + (Scalar(1) - b2) * grads.cwiseProduct(grads);
    const Scalar c1 = Scalar(1) - Scalar(std::pow(config.beta1, double(state.step)));
    const Scalar c2 = Scalar(1) - Scalar(std::pow(config.beta2, double(state.step)));
    const Scalar lr = Scalar(config.lr);
    const Scalar eps = Scalar(config.eps);
    for (Eigen::Index i = 0; i < params.size(); ++i) {
        const Scalar m_hat = state.m[i] / c1;
        const Scalar v_hat = state.v[i] / c2;
        const Scalar next = params[i] - lr * m_hat / (std::sqrt(v_hat) + eps);
        params[i] = std::clamp(next, Scalar(config.lower), Scalar(config.upper));
    }
}

/// Cosine annealing from base_lr at epoch 0 towards 0 at `epochs`.
inline double cosine_lr(double base_lr, int epoch, int epochs)
{
    if (epochs <= 0)
        return base_lr;
    return 0.5 * base_lr * (1.0 + std::cos(std::numbers::pi * double(epoch) / double(epochs)));
}

struct FitOptions
{
    int epochs = 100;
    double lr = 1e-4;
    Sampler sampler = Sampler::manifold;
    LossWeights weights;
    AdamConfig adam;   ///< lr is overridden per epoch by the schedule
    int threads = 1;
    std::uint64_t seed = 0;
    int crop = 0;      ///< square random crop size; 0 trains on full images
};

struct FitLogRow
{
    int epoch = 0;
    double lr = 0.0;
    LossBreakdown loss;
    double psnr = 0.0;  ///< 8-bit sRGB prediction vs target, mean over pairs
    double ssim = 0.0;
};

template <typename Scalar>
struct FitResult
{
    FusionModel<Scalar> model;
    std::vector<FitLogRow> log;  ///< epochs 0..E-1 before each step, then epoch E after the last step
};

namespace detail {

template <typename Scalar>
void accumulate_row(FitLogRow& row, const LossResult<Scalar>& r, const LinearImage<Scalar>& target, double scale)
{
    row.loss.l1 += scale * r.loss.l1;
    row.loss.color += scale * r.loss.color;
    row.loss.tv += scale * r.loss.tv;
    row.loss.total += scale * r.loss.total;
    row.loss.weights = r.loss.weights;
    const Rgb8Image a = linear_to_srgb(r.prediction);
    const Rgb8Image b = linear_to_srgb(target);
    row.psnr += scale * psnr(a, b);
    if (a.width >= 11 && a.height >= 11)
        row.ssim += scale * ssim(a, b);
}

} // namespace detail

/// Direct optimization of W and the LUT by full-image Adam steps under a
/// cosine-annealed learning rate. Deterministic for a given seed; the seed
/// only drives crop placement.
template <typename Scalar>
FitResult<Scalar> fit(FusionModel<Scalar> model,
                      const std::vector<std::pair<LinearImage<Scalar>, LinearImage<Scalar>>>& pairs,
                      const FitOptions& options)
{
    if (pairs.empty())
        throw InvalidInput("fit: at least one (degraded, target) pair is required");
    if (options.epochs < 0)
        throw InvalidInput("fit: epochs must be >= 0");
    for (const auto& [degraded, target] : pairs)
        require_same_size(degraded.width(), degraded.height(), target.width(), target.height(), "fit pair");

    std::mt19937_64 rng(options.seed);
    const bool cropping = options.crop > 0;
    std::vector<TrainingPair<Scalar>> cached;
    if (!cropping)
        for (const auto& [degraded, target] : pairs)
            cached.push_back(prepare_pair(model, degraded, target, options.sampler, options.threads));

    auto pair_for_epoch = [&](std::size_t p) -> TrainingPair<Scalar> {
        const auto& [degraded, target] = pairs[p];
        const int cw = std::min(options.crop, degraded.width());
        const int ch = std::min(options.crop, degraded.height());
        std::uniform_int_distribution<int> dx(0, degraded.width() - cw);
        std::uniform_int_distribution<int> dy(0, degraded.height() - ch);
        const int x0 = dx(rng);
        const int y0 = dy(rng);
        return prepare_pair(model, degraded.crop(x0, y0, cw, ch), target.crop(x0, y0, cw, ch), options.sampler,
                            options.threads);
    };

    const Eigen::Index n_grid = model.grid.dims().count();
    const Eigen::Index n_lut = model.lut.entries().size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> params(n_grid + n_lut);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grads(n_grid + n_lut);
    AdamState<Scalar> state;
    FitResult<Scalar> result;
    const double scale = 1.0 / double(pairs.size());

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        FitLogRow row;
        row.epoch = epoch;
        row.lr = cosine_lr(options.lr, epoch, options.epochs);
        AdamConfig adam = options.adam;
        adam.lr = row.lr;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const TrainingPair<Scalar> fresh = cropping ? pair_for_epoch(p) : TrainingPair<Scalar>{};
            const TrainingPair<Scalar>& pair = cropping ? fresh : cached[p];
            const auto r = loss_and_gradients(model, pair, options.weights, options.threads);
            detail::accumulate_row(row, r, pair.target, scale);

            params << model.grid.values(), model.lut.entries();
            grads << r.grads.d_grid, r.grads.d_lut;
            adam_step<Scalar>(params, grads, state, adam);
            model.grid.values() = params.head(n_grid);
            model.lut.entries() = params.tail(n_lut);
        }
        result.log.push_back(row);
    }

    FitLogRow last;
    last.epoch = options.epochs;
    last.lr = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& [degraded, target] = pairs[p];
        const TrainingPair<Scalar> pair =
            cropping ? prepare_pair(model, degraded, target, options.sampler, options.threads) : TrainingPair<Scalar>{};
        const auto r = loss_and_gradients(model, cropping ? pair : cached[p], options.weights, options.threads, false);
        detail::accumulate_row(last, r, target, scale);
    }
    result.log.push_back(last);
    result.model = std::move(model);
    return result;
}

} // namespace lutgrid

#endif // LUTGRID_TRAINER_HPP
