#ifndef LUTGRID_QUANTIZER_HPP
#define LUTGRID_QUANTIZER_HPP

#include <lutgrid/weight_grid.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace lutgrid {

/// Per-tensor affine INT8 encoding of a weight grid:
/// w = scale * (q - zero_point).
struct QuantizedGrid
{
    GridDims dims;
    float scale = 1.0f;
    std::int32_t zero_point = 0;
    std::vector<std::int8_t> payload;  ///< GridDims::index order

    bool operator==(const QuantizedGrid&) const = default;
};

/// Dynamic post-training quantization: the range comes from the grid itself,
/// scale = (max - min) / 255 and zero_point puts min at code -128.
///
/// A constant grid has no range; it uses scale = |v| (1 when v == 0) so that
/// the single value is reproduced exactly. When min lies so far from 0 that
/// the zero point would leave [-128, 127], the range is widened to include 0
/// instead of clamping the zero point, which would shift every code.
inline QuantizedGrid quantize_grid(const WeightGrid<float>& grid)
{
    const auto& w = grid.values();
    float lo = w.minCoeff();
    float hi = w.maxCoeff();

    QuantizedGrid q;
    q.dims = grid.dims();
    if (hi > lo) {
        q.scale = (hi - lo) / 255.0f;
        const float zp = std::round(-128.0f - lo / q.scale);
        if (zp < -128.0f || zp > 127.0f) {
            lo = std::min(lo, 0.0f);
            hi = std::max(hi, 0.0f);
            q.scale = (hi - lo) / 255.0f;
        }
    } else {
        q.scale = lo != 0.0f ? std::abs(lo) : 1.0f;
    }
    q.zero_point = static_cast<std::int32_t>(std::clamp(std::round(-128.0f - lo / q.scale), -128.0f, 127.0f));

    q.payload.resize(static_cast<std::size_t>(w.size()));
    for (Eigen::Index n = 0; n < w.size(); ++n) {
        const float code = std::round(w[n] / q.scale + static_cast<float>(q.zero_point));
        q.payload[static_cast<std::size_t>(n)] = static_cast<std::int8_t>(std::clamp(code, -128.0f, 127.0f));
    }
    return q;
}

inline WeightGrid<float> dequantize_grid(const QuantizedGrid& q)
{
    if (!(q.scale > 0.0f))
        throw InvalidInput("dequantize_grid: scale must be positive");
    if (q.payload.size() != static_cast<std::size_t>(q.dims.count()))
        throw InvalidInput("dequantize_grid: payload size does not match dimensions");
    Eigen::VectorXf values(q.dims.count());
    for (Eigen::Index n = 0; n < values.size(); ++n) {
        const float v = q.scale * static_cast<float>(std::int32_t(q.payload[static_cast<std::size_t>(n)]) - q.zero_point);
        values[n] = std::clamp(v, 0.0f, 1.0f);
    }
    return WeightGrid<float>(q.dims, std::move(values));
}

/// Largest absolute reconstruction error of quantize-then-dequantize.
inline float max_quantization_error(const WeightGrid<float>& grid, const QuantizedGrid& q)
{
    return (dequantize_grid(q).values() - grid.values()).cwiseAbs().maxCoeff();
}

} // namespace lutgrid

#endif // LUTGRID_QUANTIZER_HPP
