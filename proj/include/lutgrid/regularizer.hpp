#ifndef LUTGRID_REGULARIZER_HPP
#define LUTGRID_REGULARIZER_HPP

#include <lutgrid/edge_field.hpp>
#include <lutgrid/weight_grid.hpp>

#include <span>

namespace lutgrid {

struct TvWeights
{
    double spatial = 1.0;
    double luma = 1.0;
};

struct TvBreakdown
{
    double r_spatial = 0.0;
    double r_luma = 0.0;
    double l_tv = 0.0;
    TvWeights weights;
};

namespace detail {

template <typename Scalar>
inline Scalar sign_or_zero(Scalar d)
{
    return d > Scalar(0) ? Scalar(1) : (d < Scalar(0) ? Scalar(-1) : Scalar(0));
}

// Shape check for the span overloads, which allow singleton axes.
inline void check_tv_shapes(const GridDims& dims, std::size_t grid_size, std::size_t alpha_size)
{
    if (dims.nx < 1 || dims.ny < 1 || dims.nl < 1)
        throw InvalidInput("tv: dimensions must be positive");
    if (grid_size != static_cast<std::size_t>(dims.count()) || alpha_size != grid_size)
        throw InvalidInput("tv: grid and alpha must share dimensions");
}

} // namespace detail

/// Edge-aware total variation of W:
///   R_spatial = sum alpha(i,j,k) (|W(i+1,j,k)-W(i,j,k)| + |W(i,j+1,k)-W(i,j,k)|)
///   R_luma    = sum |W(i,j,k+1)-W(i,j,k)|
/// with alpha taken at the lower node of each pair.
template <typename Scalar>
TvBreakdown tv_loss(const GridDims& dims, std::span<const Scalar> grid, std::span<const Scalar> alpha,
                    TvWeights weights)
{
    detail::check_tv_shapes(dims, grid.size(), alpha.size());
    double spatial = 0.0;
    double luma = 0.0;
    for (int i = 0; i < dims.nx; ++i)
        for (int j = 0; j < dims.ny; ++j)
            for (int k = 0; k < dims.nl; ++k) {
                const auto n = dims.index(i, j, k);
                const double w = grid[n];
                const double a = alpha[n];
                if (i + 1 < dims.nx)
                    spatial += a * std::abs(double(grid[dims.index(i + 1, j, k)]) - w);
                if (j + 1 < dims.ny)
                    spatial += a * std::abs(double(grid[dims.index(i, j + 1, k)]) - w);
                if (k + 1 < dims.nl)
                    luma += std::abs(double(grid[dims.index(i, j, k + 1)]) - w);
            }
    return {spatial, luma, weights.spatial * spatial + weights.luma * luma, weights};
}

template <typename Scalar>
TvBreakdown tv_loss(const WeightGrid<Scalar>& grid, const GridEdgeField<Scalar>& alpha, TvWeights weights)
{
    if (!(grid.dims() == alpha.dims))
        throw InvalidInput("tv_loss: grid and alpha dimensions differ");
    return tv_loss<Scalar>(grid.dims(), {grid.values().data(), std::size_t(grid.values().size())},
                           {alpha.alpha.data(), std::size_t(alpha.alpha.size())}, weights);
}

/// Subgradient of tv_loss with sign(0) = 0, same layout as the grid.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tv_gradient(const GridDims& dims, std::span<const Scalar> grid,
                                                     std::span<const Scalar> alpha, TvWeights weights)
{
    detail::check_tv_shapes(dims, grid.size(), alpha.size());
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> g = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(dims.count());
    const Scalar ls = Scalar(weights.spatial);
    const Scalar ll = Scalar(weights.luma);
    auto pair = [&](Eigen::Index lower, Eigen::Index upper, Scalar coeff) {
        const Scalar s = coeff * detail::sign_or_zero(grid[upper] - grid[lower]);
        g[upper] += s;
        g[lower] -= s;
    };
    for (int i = 0; i < dims.nx; ++i)
        for (int j = 0; j < dims.ny; ++j)
            for (int k = 0; k < dims.nl; ++k) {
                const auto n = dims.index(i, j, k);
                if (i + 1 < dims.nx)
                    pair(n, dims.index(i + 1, j, k), ls * alpha[n]);
                if (j + 1 < dims.ny)
                    pair(n, dims.index(i, j + 1, k), ls * alpha[n]);
                if (k + 1 < dims.nl)
                    pair(n, dims.index(i, j, k + 1), ll);
            }
    return g;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tv_gradient(const WeightGrid<Scalar>& grid,
                                                     const GridEdgeField<Scalar>& alpha, TvWeights weights)
{
    if (!(grid.dims() == alpha.dims))
        throw InvalidInput("tv_gradient: grid and alpha dimensions differ");
    return tv_gradient<Scalar>(grid.dims(), {grid.values().data(), std::size_t(grid.values().size())},
                               {alpha.alpha.data(), std::size_t(alpha.alpha.size())}, weights);
}

} // namespace lutgrid

#endif // LUTGRID_REGULARIZER_HPP
