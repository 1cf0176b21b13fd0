#ifndef LUTGRID_EDGE_FIELD_HPP
#define LUTGRID_EDGE_FIELD_HPP

#include <lutgrid/image.hpp>
#include <lutgrid/parallel.hpp>
#include <lutgrid/weight_grid.hpp>

#include <cmath>

namespace lutgrid {

enum class SobelScale
{
    unit,  ///< responses divided by 8: a ramp of slope 1/px has magnitude 1
    raw,   ///< plain +-1/+-2 kernel weights
};

struct EdgeOptions
{
    float beta = 10.0f;
    SobelScale scale = SobelScale::unit;
};

/// Per-pixel luminance gradient statistics.
template <typename Scalar = float>
struct EdgeField
{
    Plane<Scalar> gx;
    Plane<Scalar> gy;
    Plane<Scalar> magnitude;    ///< e = |grad L|
    Plane<Scalar> theta;        ///< atan2(gy, gx)
    Plane<Scalar> uncertainty;  ///< u = exp(-beta e)
    Scalar beta = Scalar(10);

    int width() const { return static_cast<int>(magnitude.cols()); }
    int height() const { return static_cast<int>(magnitude.rows()); }
};

/// Sobel gradients of the luma plane with replicate padding.
template <typename Scalar>
EdgeField<Scalar> compute_edge_field(const LinearImage<Scalar>& image, const EdgeOptions& options = {},
                                     int threads = 1)
{
    const int w = image.width();
    const int h = image.height();
    if (w < 3 || h < 3)
        throw InvalidInput("compute_edge_field: image must be at least 3x3");

    const Scalar beta = Scalar(options.beta);
    const Scalar norm = options.scale == SobelScale::unit ? Scalar(1) / Scalar(8) : Scalar(1);
    const Plane<Scalar>& L = image.luma();

    EdgeField<Scalar> f;
    f.beta = beta;
    f.gx.resize(h, w);
    f.gy.resize(h, w);
    f.magnitude.resize(h, w);
    f.theta.resize(h, w);
    f.uncertainty.resize(h, w);

    parallel_rows(h, threads, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const int ym = std::max(y - 1, 0);
            const int yp = std::min(y + 1, h - 1);
            for (int x = 0; x < w; ++x) {
                const int xm = std::max(x - 1, 0);
                const int xp = std::min(x + 1, w - 1);
                const Scalar gx = (L(ym, xp) - L(ym, xm)) + Scalar(2) * (L(y, xp) - L(y, xm)) + (L(yp, xp) - L(yp, xm));
                const Scalar gy = (L(yp, xm) - L(ym, xm)) + Scalar(2) * (L(yp, x) - L(ym, x)) + (L(yp, xp) - L(ym, xp));
                const Scalar sx = gx * norm;
                const Scalar sy = gy * norm;
                const Scalar e = std::sqrt(sx * sx + sy * sy);
                f.gx(y, x) = sx;
                f.gy(y, x) = sy;
                f.magnitude(y, x) = e;
                f.theta(y, x) = std::atan2(sy, sx);
                f.uncertainty(y, x) = std::exp(-beta * e);
            }
        }
    });
    return f;
}

/// Edge-aware weighting factor per grid node, alpha = exp(-beta G_grid).
template <typename Scalar = float>
struct GridEdgeField
{
    GridDims dims;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> alpha;  ///< flat, GridDims::index order
};

/// Samples the gradient magnitude at node positions and replicates the
/// resulting alpha across luminance bins.
template <typename Scalar>
GridEdgeField<Scalar> grid_alpha(const EdgeField<Scalar>& field, GridDims dims)
{
    GridEdgeField<Scalar> out{dims, {}};
    out.alpha.resize(dims.count());
    for (int i = 0; i < dims.nx; ++i) {
        const Scalar px = node_to_pixel<Scalar>(i, dims.nx, field.width());
        for (int j = 0; j < dims.ny; ++j) {
            const Scalar py = node_to_pixel<Scalar>(j, dims.ny, field.height());
            const Scalar a = std::exp(-field.beta * sample_bilinear(field.magnitude, px, py));
            for (int k = 0; k < dims.nl; ++k)
                out.alpha[dims.index(i, j, k)] = a;
        }
    }
    return out;
}

/// Largest gradient magnitude among `steps + 1` evenly spaced bilinear samples
/// on the segment, both endpoints included. Sample s and steps - s are mirror
/// images, so swapping the endpoints yields the same maximum.
template <typename Scalar>
Scalar segment_max_gradient(const EdgeField<Scalar>& field, Scalar x0, Scalar y0, Scalar x1, Scalar y1,
                            int steps = 4)
{
    steps = std::max(steps, 1);
    Scalar best = 0;
    for (int s = 0; s <= steps; ++s) {
        // Interpolate from the nearer endpoint (the midpoint symmetrically) so
        // reversed segments hit identical points.
        Scalar x, y;
        if (2 * s == steps) {
            x = Scalar(0.5) * (x0 + x1);
            y = Scalar(0.5) * (y0 + y1);
        } else if (2 * s < steps) {
            const Scalar t = Scalar(s) / Scalar(steps);
            x = x0 + t * (x1 - x0);
            y = y0 + t * (y1 - y0);
        } else {
            const Scalar t = Scalar(steps - s) / Scalar(steps);
            x = x1 + t * (x0 - x1);
            y = y1 + t * (y0 - y1);
        }
        best = std::max(best, sample_bilinear(field.magnitude, x, y));
    }
    return best;
}

} // namespace lutgrid

#endif // LUTGRID_EDGE_FIELD_HPP
