#ifndef LUTGRID_LUT3D_HPP
#define LUTGRID_LUT3D_HPP

#include <lutgrid/image.hpp>

#include <array>
#include <cmath>
#include <filesystem>

namespace lutgrid {

/// Integer cell origin plus fractional offset of a continuous lattice index.
/// The origin is at most n-2 so origin+1 is always a valid node; at the last
/// node the fraction is 1.
template <typename Scalar>
struct LatticeCoord
{
    int lo = 0;
    Scalar frac = 0;
};

template <typename Scalar>
inline LatticeCoord<Scalar> split_lattice_index(Scalar continuous, int n)
{
    continuous = std::clamp(continuous, Scalar(0), Scalar(n - 1));
    const int lo = std::min(static_cast<int>(std::floor(continuous)), n - 2);
    return {lo, continuous - Scalar(lo)};
}

template <typename Scalar>
struct VertexWeight
{
    int vertex = 0;
    Scalar weight = 0;
};

/// Learnable 3D color lookup table over linear RGB.
///
/// Entries are Nc^3 output triples; vertex (r,g,b) lives at flat index
/// r + g*Nc + b*Nc^2 (red fastest, the .cube row order).
template <typename Scalar = float>
class Lut3D
{
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Lut3D() = default;

    Lut3D(int size, Vector entries) : size_(size), entries_(std::move(entries))
    {
        if (size < 2)
            throw InvalidInput("LUT size must be >= 2, got " + std::to_string(size));
        if (entries_.size() != 3 * vertex_count())
            throw InvalidInput("LUT entry count does not match size " + std::to_string(size));
    }

    int size() const { return size_; }
    Eigen::Index vertex_count() const { return Eigen::Index(size_) * size_ * size_; }

    int vertex_index(int r, int g, int b) const { return r + size_ * (g + size_ * b); }

    Eigen::Ref<Rgb<Scalar>> entry(int vertex) { return entries_.template segment<3>(3 * Eigen::Index(vertex)); }
    Rgb<Scalar> entry(int vertex) const { return entries_.template segment<3>(3 * Eigen::Index(vertex)); }
    Rgb<Scalar> entry(int r, int g, int b) const { return entry(vertex_index(r, g, b)); }

    /// Flat storage, 3 scalars per vertex.
    const Vector& entries() const { return entries_; }
    Vector& entries() { return entries_; }

    template <typename Other>
    Lut3D<Other> cast() const
    {
        return Lut3D<Other>(size_, entries_.template cast<Other>());
    }

private:
    int size_ = 0;
    Vector entries_;
};

template <typename Scalar = float>
Lut3D<Scalar> identity_lut(int size)
{
    if (size < 2)
        throw InvalidInput("identity_lut: size must be >= 2, got " + std::to_string(size));
    typename Lut3D<Scalar>::Vector entries(3 * Eigen::Index(size) * size * size);
    Eigen::Index n = 0;
    for (int b = 0; b < size; ++b)
        for (int g = 0; g < size; ++g)
            for (int r = 0; r < size; ++r) {
                entries[n++] = Scalar(r) / Scalar(size - 1);
                entries[n++] = Scalar(g) / Scalar(size - 1);
                entries[n++] = Scalar(b) / Scalar(size - 1);
            }
    return Lut3D<Scalar>(size, std::move(entries));
}

/// The eight lattice vertices surrounding rgb with their product weights.
/// Weights are nonnegative and the last is 1 minus the others, so they sum to 1.
template <typename Scalar>
std::array<VertexWeight<Scalar>, 8> trilinear_vertex_weights(const Rgb<Scalar>& rgb, int size)
{
    const Scalar scale = Scalar(size - 1);
    const auto r = split_lattice_index(clamp01(rgb[0]) * scale, size);
    const auto g = split_lattice_index(clamp01(rgb[1]) * scale, size);
    const auto b = split_lattice_index(clamp01(rgb[2]) * scale, size);

    std::array<VertexWeight<Scalar>, 8> out;
    Scalar sum = 0;
    for (int corner = 0; corner < 8; ++corner) {
        const int dr = corner & 1;
        const int dg = (corner >> 1) & 1;
        const int db = (corner >> 2) & 1;
        const Scalar w = (dr ? r.frac : Scalar(1) - r.frac) * (dg ? g.frac : Scalar(1) - g.frac) *
                         (db ? b.frac : Scalar(1) - b.frac);
        out[corner].vertex = (r.lo + dr) + size * ((g.lo + dg) + size * (b.lo + db));
        if (corner < 7) {
            out[corner].weight = w;
            sum += w;
        } else {
            out[corner].weight = std::max(Scalar(0), Scalar(1) - sum);
        }
    }
    return out;
}

/// Trilinear interpolation of the LUT at a linear RGB color; inputs are
/// clamped to the unit cube.
template <typename Scalar>
Rgb<Scalar> trilinear_sample(const Lut3D<Scalar>& lut, const Rgb<Scalar>& rgb)
{
    Rgb<Scalar> out = Rgb<Scalar>::Zero();
    for (const auto& vw : trilinear_vertex_weights(rgb, lut.size()))
        out += vw.weight * lut.entry(vw.vertex);
    return out;
}

/// Reads an Adobe .cube 3D LUT. Throws ParseError naming the line.
Lut3D<float> read_cube(const std::filesystem::path& path);

/// Writes an Adobe .cube 3D LUT (red fastest).
void write_cube(const Lut3D<float>& lut, const std::filesystem::path& path, const std::string& title = "lutgrid");

} // namespace lutgrid

#endif // LUTGRID_LUT3D_HPP
