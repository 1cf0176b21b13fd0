#ifndef LUTGRID_WEIGHT_GRID_HPP
#define LUTGRID_WEIGHT_GRID_HPP

#include <lutgrid/image.hpp>
#include <lutgrid/parallel.hpp>

namespace lutgrid {

/// Node counts of a bilateral grid: spatial (nx, ny) and luminance bins (nl).
struct GridDims
{
    int nx = 128;
    int ny = 72;
    int nl = 24;

    Eigen::Index count() const { return Eigen::Index(nx) * ny * nl; }

    /// Flat index with i slowest and k fastest.
    Eigen::Index index(int i, int j, int k) const { return (Eigen::Index(i) * ny + j) * nl + k; }

    bool operator==(const GridDims&) const = default;
};

/// Pixel coordinate of spatial node `node` when `nodes` nodes span `extent`
/// pixels; node 0 sits on pixel 0 and the last node on pixel extent-1.
template <typename Scalar>
inline Scalar node_to_pixel(int node, int nodes, int extent)
{
    return Scalar(node) * Scalar(extent - 1) / Scalar(nodes - 1);
}

/// Continuous grid index of a pixel coordinate (inverse of node_to_pixel).
template <typename Scalar>
inline Scalar pixel_to_grid(Scalar pixel, int nodes, int extent)
{
    if (extent <= 1)
        return Scalar(0);
    return pixel / Scalar(extent - 1) * Scalar(nodes - 1);
}

/// Bilateral weight grid W over (x, y, luminance), entries in [0,1].
template <typename Scalar = float>
class WeightGrid
{
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    WeightGrid() = default;

    WeightGrid(GridDims dims, Vector values) : dims_(dims), values_(std::move(values))
    {
        if (dims.nx < 2 || dims.ny < 2 || dims.nl < 2)
            throw InvalidInput("grid dimensions must be >= 2, got " + std::to_string(dims.nx) + "x" +
                               std::to_string(dims.ny) + "x" + std::to_string(dims.nl));
        if (values_.size() != dims.count())
            throw InvalidInput("grid value count does not match dimensions");
    }

    const GridDims& dims() const { return dims_; }
    Scalar operator()(int i, int j, int k) const { return values_[dims_.index(i, j, k)]; }
    Scalar& operator()(int i, int j, int k) { return values_[dims_.index(i, j, k)]; }

    const Vector& values() const { return values_; }
    Vector& values() { return values_; }

    void clamp_to_unit() { values_ = values_.cwiseMax(Scalar(0)).cwiseMin(Scalar(1)); }

    template <typename Other>
    WeightGrid<Other> cast() const
    {
        return WeightGrid<Other>(dims_, values_.template cast<Other>());
    }

private:
    GridDims dims_;
    Vector values_;
};

template <typename Scalar = float>
WeightGrid<Scalar> init_grid(GridDims dims, Scalar fill)
{
    if (!(fill >= Scalar(0) && fill <= Scalar(1)))
        throw InvalidInput("init_grid: fill must lie in [0,1]");
    if (dims.nx < 2 || dims.ny < 2 || dims.nl < 2)
        throw InvalidInput("init_grid: dimensions must be >= 2");
    return WeightGrid<Scalar>(dims, WeightGrid<Scalar>::Vector::Constant(dims.count(), fill));
}

/// Linear RGB sampled from the input image at every spatial node.
template <typename Scalar = float>
struct NodeSampleField
{
    int nx = 0;
    int ny = 0;
    /// Row i*ny + j holds the sample of node (i, j).
    Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor> samples;

    Rgb<Scalar> at(int i, int j) const { return samples.row(Eigen::Index(i) * ny + j).transpose(); }
};

/// Bilinear samples of the image at node-anchored pixel positions.
template <typename Scalar>
NodeSampleField<Scalar> sample_nodes(const LinearImage<Scalar>& image, int nx, int ny)
{
    if (image.width() < 2 || image.height() < 2)
        throw InvalidInput("sample_nodes: image must be at least 2x2");
    if (nx < 2 || ny < 2)
        throw InvalidInput("sample_nodes: node counts must be >= 2");
    NodeSampleField<Scalar> field{nx, ny, {}};
    field.samples.resize(Eigen::Index(nx) * ny, 3);
    for (int i = 0; i < nx; ++i) {
        const Scalar px = node_to_pixel<Scalar>(i, nx, image.width());
        for (int j = 0; j < ny; ++j) {
            const Scalar py = node_to_pixel<Scalar>(j, ny, image.height());
            for (int c = 0; c < 3; ++c)
                field.samples(Eigen::Index(i) * ny + j, c) = sample_bilinear(image.channel(c), px, py);
        }
    }
    return field;
}

} // namespace lutgrid

#endif // LUTGRID_WEIGHT_GRID_HPP
