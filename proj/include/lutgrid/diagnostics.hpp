#ifndef LUTGRID_DIAGNOSTICS_HPP
#define LUTGRID_DIAGNOSTICS_HPP

#include <lutgrid/edge_field.hpp>
#include <lutgrid/image.hpp>
#include <lutgrid/weight_grid.hpp>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace lutgrid {

/// Black-red-yellow-white ramp for v in [0,1].
std::array<std::uint8_t, 3> hot_color(float v);

/// W(i, j, bin) as an nx x ny image, each node drawn as a scale x scale block.
Rgb8Image weight_heatmap(const WeightGrid<float>& grid, int bin, int scale = 8);

/// Central-difference spatial gradient magnitude of W in one luminance bin,
/// grayscale with the maximum mapped to 255 (all black when W is flat).
Rgb8Image weight_gradient_map(const WeightGrid<float>& grid, int bin, int scale = 8);

/// CSV with one row per luminance bin: bin, bin-center luma and W at each
/// requested (i, j) node.
std::string bin_curves_csv(const WeightGrid<float>& grid, const std::vector<std::pair<int, int>>& nodes);

/// Per-pixel sum of absolute channel differences.
Plane<float> difference_plane(const LinearImage<float>& a, const LinearImage<float>& b);

/// Smallest difference that maps to 255 in difference_map.
inline constexpr float kMinDifferenceScale = 1.0f / 255.0f;

/// Difference plane scaled linearly so the maximum maps to 255, with the
/// scale floored at kMinDifferenceScale.
Rgb8Image difference_map(const LinearImage<float>& a, const LinearImage<float>& b);

enum class ProfileAxis
{
    row,
    column,
};

/// Luma along one row (or column) of three equally sized images. One CSV row
/// per position, header position,input_luma,trilinear_luma,manifold_luma.
std::string edge_profile_csv(const LinearImage<float>& input, const LinearImage<float>& trilinear,
                             const LinearImage<float>& manifold, ProfileAxis axis, int index);

/// Plane mapped linearly from [lo, hi] to [0, 255].
Rgb8Image plane_to_gray(const Plane<float>& plane, float lo, float hi);

struct EdgeDumps
{
    Rgb8Image magnitude;    ///< 0 .. max e
    Rgb8Image theta;        ///< -pi .. pi
    Rgb8Image uncertainty;  ///< 0 .. 1
};

EdgeDumps edge_dumps(const EdgeField<float>& field);

} // namespace lutgrid

#endif // LUTGRID_DIAGNOSTICS_HPP
