#ifndef LUTGRID_FUSION_HPP
#define LUTGRID_FUSION_HPP

#include <lutgrid/edge_field.hpp>
#include <lutgrid/lut3d.hpp>
#include <lutgrid/weight_grid.hpp>

#include <array>
#include <numbers>
#include <string_view>

namespace lutgrid {

enum class Sampler
{
    trilinear,
    manifold,
};

inline Sampler parse_sampler(std::string_view name)
{
    if (name == "trilinear")
        return Sampler::trilinear;
    if (name == "manifold")
        return Sampler::manifold;
    throw InvalidInput("unknown sampler '" + std::string(name) + "' (expected trilinear|manifold)");
}

inline const char* sampler_name(Sampler s)
{
    return s == Sampler::trilinear ? "trilinear" : "manifold";
}

/// Hyperparameters of the edge field and manifold-adaptive sampling.
struct SamplerParams
{
    EdgeOptions edge;             ///< beta = 10, unit-scaled Sobel
    double kappa = 3.0;           ///< kernel elongation
    double tau = 0.15;            ///< corner rejection threshold on gradient magnitude
    double sigma_s = 0.5;         ///< spatial-luma bandwidth, grid units
    double sigma_r = 0.2;         ///< color bandwidth, LUT index units
    int segment_steps = 4;        ///< segment test samples = steps + 1
    double epsilon_norm = 1e-8;   ///< below this raw-weight sum, weights go uniform

    void validate() const
    {
        if (!(edge.beta > 0.0f))
            throw InvalidInput("beta must be > 0");
        if (!(kappa >= 0.0))
            throw InvalidInput("kappa must be >= 0");
        if (!(tau > 0.0))
            throw InvalidInput("tau must be > 0");
        if (!(sigma_s > 0.0) || !(sigma_r > 0.0))
            throw InvalidInput("sigma_s and sigma_r must be > 0");
        if (segment_steps < 1)
            throw InvalidInput("segment steps must be >= 1");
        if (!(epsilon_norm > 0.0))
            throw InvalidInput("epsilon_norm must be > 0");
    }
};

/// Learnable state: weight grid plus LUT. The six-dimensional fusion tensor
///   T(i,j,k,r,g,b) = (1 - W(i,j,k)) LUT(r,g,b) + W(i,j,k) I_sample(i,j)
/// is a view over these and is evaluated per corner, never stored.
template <typename Scalar = float>
struct FusionModel
{
    WeightGrid<Scalar> grid;
    Lut3D<Scalar> lut;
    SamplerParams params;

    Eigen::Index parameter_count() const { return grid.dims().count() + 3 * lut.vertex_count(); }

    template <typename Other>
    FusionModel<Other> cast() const
    {
        return {grid.template cast<Other>(), lut.template cast<Other>(), params};
    }
};

template <typename Scalar = float>
FusionModel<Scalar> make_model(GridDims dims, int lut_size, Scalar fill = Scalar(0.5), SamplerParams params = {})
{
    params.validate();
    return {init_grid<Scalar>(dims, fill), identity_lut<Scalar>(lut_size), params};
}

/// Continuous lattice coordinates of one pixel along all six axes.
template <typename Scalar>
struct PixelIndices
{
    LatticeCoord<Scalar> x, y, l;  // spatial-luma
    LatticeCoord<Scalar> r, g, b;  // color
    Scalar x_g = 0, y_g = 0, l_g = 0;
    Scalar r_g = 0, g_g = 0, b_g = 0;
};

/// Lattice coordinates of pixel (x, y) with linear color rgb. Spatial axes map
/// pixel 0 to node 0 and the last pixel to the last node; luminance is
/// recomputed from rgb.
template <typename Scalar>
PixelIndices<Scalar> pixel_indices(int x, int y, const Rgb<Scalar>& rgb, int width, int height, const GridDims& dims,
                                   int lut_size)
{
    PixelIndices<Scalar> p;
    const Rgb<Scalar> c(clamp01(rgb[0]), clamp01(rgb[1]), clamp01(rgb[2]));
    p.x_g = pixel_to_grid(Scalar(x), dims.nx, width);
    p.y_g = pixel_to_grid(Scalar(y), dims.ny, height);
    p.l_g = clamp01(luma_of(c)) * Scalar(dims.nl - 1);
    p.r_g = c[0] * Scalar(lut_size - 1);
    p.g_g = c[1] * Scalar(lut_size - 1);
    p.b_g = c[2] * Scalar(lut_size - 1);
    p.x = split_lattice_index(p.x_g, dims.nx);
    p.y = split_lattice_index(p.y_g, dims.ny);
    p.l = split_lattice_index(p.l_g, dims.nl);
    p.r = split_lattice_index(p.r_g, lut_size);
    p.g = split_lattice_index(p.g_g, lut_size);
    p.b = split_lattice_index(p.b_g, lut_size);
    return p;
}

/// One entry of the fusion tensor: blend of the LUT output at rgb with the
/// node sample of (i, j), weighted by W(i, j, k).
template <typename Scalar>
Rgb<Scalar> fused_corner_value(const FusionModel<Scalar>& model, int i, int j, int k,
                               const NodeSampleField<Scalar>& nodes, const Rgb<Scalar>& rgb)
{
    const Scalar w = model.grid(i, j, k);
    return (Scalar(1) - w) * trilinear_sample(model.lut, rgb) + w * nodes.at(i, j);
}

template <typename Scalar>
struct TangentState
{
    Scalar theta_t = 0;  ///< gradient angle + pi/2
    Scalar gamma = 1;    ///< 1 + kappa u
    Scalar gamma_x = 1;  ///< 1 + kappa u |cos theta_t|
    Scalar gamma_y = 1;  ///< 1 + kappa u |sin theta_t|
    Scalar u = 1;
};

template <typename Scalar>
TangentState<Scalar> tangent_state(const EdgeField<Scalar>& field, const SamplerParams& params, int x, int y)
{
    TangentState<Scalar> t;
    t.u = field.uncertainty(y, x);
    t.theta_t = field.theta(y, x) + std::numbers::pi_v<Scalar> / Scalar(2);
    const Scalar ku = Scalar(params.kappa) * t.u;
    t.gamma = Scalar(1) + ku;
    t.gamma_x = Scalar(1) + ku * std::abs(std::cos(t.theta_t));
    t.gamma_y = Scalar(1) + ku * std::abs(std::sin(t.theta_t));
    return t;
}

template <typename Scalar>
struct Corner
{
    int i = 0, j = 0, k = 0;
    Scalar px = 0, py = 0;  ///< pixel-space position of the (i, j) node
    bool retained = true;
    Scalar raw_weight = 0;
    Scalar weight = 0;
};

/// The 2x2x2 spatial-luma neighborhood of a pixel. Corner c has offsets
/// (c & 1, (c >> 1) & 1, (c >> 2) & 1) along (x, y, l).
template <typename Scalar>
struct CornerSet
{
    std::array<Corner<Scalar>, 8> corners;
    bool fallback = false;  ///< every corner failed the segment test

    int retained_count() const
    {
        int n = 0;
        for (const auto& c : corners)
            n += c.retained ? 1 : 0;
        return n;
    }
};

/// Marks corners whose pixel-to-node segment crosses a gradient ridge above
/// tau as rejected. The luminance offset does not enter the test, so corners
/// come in pairs. If all eight fail, all eight are kept.
template <typename Scalar>
CornerSet<Scalar> select_corners(const EdgeField<Scalar>& field, const SamplerParams& params,
                                 const PixelIndices<Scalar>& idx, const GridDims& dims, int x, int y)
{
    const int width = field.width();
    const int height = field.height();
    bool keep[4];
    Scalar node_px[4], node_py[4];
    for (int s = 0; s < 4; ++s) {
        const int i = idx.x.lo + (s & 1);
        const int j = idx.y.lo + ((s >> 1) & 1);
        node_px[s] = node_to_pixel<Scalar>(i, dims.nx, width);
        node_py[s] = node_to_pixel<Scalar>(j, dims.ny, height);
        keep[s] = segment_max_gradient(field, Scalar(x), Scalar(y), node_px[s], node_py[s], params.segment_steps) <=
                  Scalar(params.tau);
    }

    CornerSet<Scalar> set;
    const bool any = keep[0] || keep[1] || keep[2] || keep[3];
    set.fallback = !any;
    for (int c = 0; c < 8; ++c) {
        auto& corner = set.corners[c];
        const int s = c & 3;
        corner.i = idx.x.lo + (c & 1);
        corner.j = idx.y.lo + ((c >> 1) & 1);
        corner.k = idx.l.lo + ((c >> 2) & 1);
        corner.px = node_px[s];
        corner.py = node_py[s];
        corner.retained = any ? keep[s] : true;
    }
    return set;
}

/// Manifold weights of the retained corners:
///   w_c = exp(-|dp|^2 / 2 sigma_s^2) exp(-|drgb|^2 / 2 sigma_r^2) (1 - u_c)
/// with dp the spatial-luma offset in grid units (x, y divided by gamma_x,
/// gamma_y), drgb the node sample minus the pixel color in LUT index units and
/// u_c the uncertainty at the node. Normalized to sum 1; uniform when the raw
/// sum is below epsilon_norm.
template <typename Scalar>
CornerSet<Scalar> manifold_weights(const EdgeField<Scalar>& field, const SamplerParams& params,
                                   const PixelIndices<Scalar>& idx, const TangentState<Scalar>& tangent,
                                   const Rgb<Scalar>& rgb, CornerSet<Scalar> set, const NodeSampleField<Scalar>& nodes,
                                   int lut_size)
{
    const Scalar inv_2ss = Scalar(1) / (Scalar(2) * Scalar(params.sigma_s) * Scalar(params.sigma_s));
    const Scalar inv_2sr = Scalar(1) / (Scalar(2) * Scalar(params.sigma_r) * Scalar(params.sigma_r));
    const Scalar color_scale = Scalar(lut_size - 1);

    Scalar sum = 0;
    int retained = 0;
    for (auto& c : set.corners) {
        c.raw_weight = 0;
        c.weight = 0;
        if (!c.retained)
            continue;
        ++retained;
        const Scalar dx = (Scalar(c.i) - idx.x_g) / tangent.gamma_x;
        const Scalar dy = (Scalar(c.j) - idx.y_g) / tangent.gamma_y;
        const Scalar dl = Scalar(c.k) - idx.l_g;
        const Scalar dp2 = dx * dx + dy * dy + dl * dl;
        const Scalar drgb2 = ((nodes.at(c.i, c.j) - rgb) * color_scale).squaredNorm();
        const Scalar u_c = sample_bilinear(field.uncertainty, c.px, c.py);
        c.raw_weight = std::exp(-dp2 * inv_2ss) * std::exp(-drgb2 * inv_2sr) * (Scalar(1) - u_c);
        sum += c.raw_weight;
    }

    if (retained == 0)
        return set;
    if (sum < Scalar(params.epsilon_norm)) {
        const Scalar uniform = Scalar(1) / Scalar(retained);
        for (auto& c : set.corners)
            c.weight = c.retained ? uniform : Scalar(0);
    } else {
        for (auto& c : set.corners)
            c.weight = c.retained ? c.raw_weight / sum : Scalar(0);
    }
    return set;
}

/// Everything about one output pixel that does not depend on W or the LUT:
/// corner grid slots, normalized corner weights (zero for rejected corners),
/// node sample colors and the LUT vertices with their trilinear weights.
template <typename Scalar>
struct PixelPlan
{
    std::array<Eigen::Index, 8> grid_index{};
    std::array<Scalar, 8> weight{};
    std::array<Rgb<Scalar>, 8> sample;
    std::array<VertexWeight<Scalar>, 8> lut_vertices{};
};

/// Fixed precomputation shared by all pixels of one input image.
template <typename Scalar>
struct SamplingContext
{
    int width = 0;
    int height = 0;
    EdgeField<Scalar> field;  ///< empty for the trilinear sampler
    NodeSampleField<Scalar> nodes;
};

template <typename Scalar>
SamplingContext<Scalar> make_context(const LinearImage<Scalar>& image, const GridDims& dims,
                                     const SamplerParams& params, Sampler sampler, int threads = 1)
{
    SamplingContext<Scalar> ctx{image.width(), image.height(), {}, sample_nodes(image, dims.nx, dims.ny)};
    if (sampler == Sampler::manifold)
        ctx.field = compute_edge_field(image, params.edge, threads);
    return ctx;
}

namespace detail {

/// Test hook: run the manifold path with all corners kept and trilinear
/// product weights, which must reproduce the trilinear sampler exactly.
enum class ManifoldVariant
{
    standard,
    product_weights,
};

template <typename Scalar>
void fill_plan_common(PixelPlan<Scalar>& plan, const PixelIndices<Scalar>& idx, const GridDims& dims,
                      const NodeSampleField<Scalar>& nodes, const Rgb<Scalar>& rgb, int lut_size)
{
    for (int c = 0; c < 8; ++c) {
        const int i = idx.x.lo + (c & 1);
        const int j = idx.y.lo + ((c >> 1) & 1);
        const int k = idx.l.lo + ((c >> 2) & 1);
        plan.grid_index[c] = dims.index(i, j, k);
        plan.sample[c] = nodes.at(i, j);
    }
    plan.lut_vertices = trilinear_vertex_weights(rgb, lut_size);
}

template <typename Scalar>
void fill_product_weights(PixelPlan<Scalar>& plan, const PixelIndices<Scalar>& idx)
{
    for (int c = 0; c < 8; ++c) {
        const Scalar wx = (c & 1) ? idx.x.frac : Scalar(1) - idx.x.frac;
        const Scalar wy = ((c >> 1) & 1) ? idx.y.frac : Scalar(1) - idx.y.frac;
        const Scalar wl = ((c >> 2) & 1) ? idx.l.frac : Scalar(1) - idx.l.frac;
        plan.weight[c] = wx * wy * wl;
    }
}

} // namespace detail

/// Plan for the fixed-kernel baseline: all 8 corners, product weights.
template <typename Scalar>
PixelPlan<Scalar> plan_trilinear(const GridDims& dims, int lut_size, const NodeSampleField<Scalar>& nodes, int x,
                                 int y, const Rgb<Scalar>& rgb, int width, int height)
{
    const auto idx = pixel_indices(x, y, rgb, width, height, dims, lut_size);
    PixelPlan<Scalar> plan;
    detail::fill_plan_common(plan, idx, dims, nodes, rgb, lut_size);
    detail::fill_product_weights(plan, idx);
    return plan;
}

/// Plan for manifold-adaptive sampling: tangent state, corner rejection and
/// manifold weights.
template <typename Scalar>
PixelPlan<Scalar> plan_manifold(const GridDims& dims, int lut_size, const SamplerParams& params,
                                const SamplingContext<Scalar>& ctx, int x, int y, const Rgb<Scalar>& rgb,
                                detail::ManifoldVariant variant = detail::ManifoldVariant::standard)
{
    const auto idx = pixel_indices(x, y, rgb, ctx.width, ctx.height, dims, lut_size);
    PixelPlan<Scalar> plan;
    detail::fill_plan_common(plan, idx, dims, ctx.nodes, rgb, lut_size);
    if (variant == detail::ManifoldVariant::product_weights) {
        detail::fill_product_weights(plan, idx);
        return plan;
    }
    const auto tangent = tangent_state(ctx.field, params, x, y);
    auto corners = select_corners(ctx.field, params, idx, dims, x, y);
    corners = manifold_weights(ctx.field, params, idx, tangent, rgb, corners, ctx.nodes, lut_size);
    for (int c = 0; c < 8; ++c)
        plan.weight[c] = corners.corners[c].weight;
    return plan;
}

template <typename Scalar>
PixelPlan<Scalar> plan_pixel(Sampler sampler, const GridDims& dims, int lut_size, const SamplerParams& params,
                             const SamplingContext<Scalar>& ctx, int x, int y, const Rgb<Scalar>& rgb)
{
    if (sampler == Sampler::trilinear)
        return plan_trilinear(dims, lut_size, ctx.nodes, x, y, rgb, ctx.width, ctx.height);
    return plan_manifold(dims, lut_size, params, ctx, x, y, rgb);
}

/// LUT output at the pixel color.
template <typename Scalar>
Rgb<Scalar> plan_lut_output(const PixelPlan<Scalar>& plan, const Lut3D<Scalar>& lut)
{
    Rgb<Scalar> out = Rgb<Scalar>::Zero();
    for (const auto& vw : plan.lut_vertices)
        out += vw.weight * lut.entry(vw.vertex);
    return out;
}

/// Weighted sum of fused corner values, before clamping.
template <typename Scalar>
Rgb<Scalar> evaluate_plan(const PixelPlan<Scalar>& plan, const WeightGrid<Scalar>& grid, const Lut3D<Scalar>& lut)
{
    const Rgb<Scalar> lut_out = plan_lut_output(plan, lut);
    Rgb<Scalar> out = Rgb<Scalar>::Zero();
    for (int c = 0; c < 8; ++c) {
        if (plan.weight[c] == Scalar(0))
            continue;
        const Scalar w = grid.values()[plan.grid_index[c]];
        out += plan.weight[c] * ((Scalar(1) - w) * lut_out + w * plan.sample[c]);
    }
    return out;
}

/// Enhances a linear image with the chosen sampler; the output is clamped to [0,1].
template <typename Scalar>
LinearImage<Scalar> enhance(const FusionModel<Scalar>& model, const LinearImage<Scalar>& image, Sampler sampler,
                            int threads = 1)
{
    model.params.validate();
    const GridDims& dims = model.grid.dims();
    const auto ctx = make_context(image, dims, model.params, sampler, threads);
    LinearImage<Scalar> out(image.width(), image.height());
    parallel_rows(image.height(), threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y)
            for (int x = 0; x < image.width(); ++x) {
                const Rgb<Scalar> rgb = image.rgb(x, y);
                const auto plan = plan_pixel(sampler, dims, model.lut.size(), model.params, ctx, x, y, rgb);
                out.set_rgb(x, y, evaluate_plan(plan, model.grid, model.lut));
            }
    });
    return out;
}

template <typename Scalar>
LinearImage<Scalar> enhance_trilinear(const FusionModel<Scalar>& model, const LinearImage<Scalar>& image,
                                      int threads = 1)
{
    return enhance(model, image, Sampler::trilinear, threads);
}

template <typename Scalar>
LinearImage<Scalar> enhance_manifold(const FusionModel<Scalar>& model, const LinearImage<Scalar>& image,
                                     int threads = 1)
{
    return enhance(model, image, Sampler::manifold, threads);
}

} // namespace lutgrid

#endif // LUTGRID_FUSION_HPP
