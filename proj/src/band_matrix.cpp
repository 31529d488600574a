#include "bandpick/band_matrix.hpp"

#include <cmath>

#include "bandpick/errors.hpp"

namespace bandpick {

namespace {

// Row indices 0, s, 2s, ... with the smallest stride s that fits the cap.
std::size_t subsample_stride(std::size_t total, std::size_t cap) {
    if (cap == 0 || total <= cap) return 1;
    return (total + cap - 1) / cap;
}

}  // namespace

BandMatrix::BandMatrix(std::vector<double> values, std::size_t rows, int bands)
    : values_(std::move(values)), rows_(rows), bands_(bands) {
    if (rows_ < 2) throw PreconditionError("band matrix needs at least 2 rows");
    if (bands_ <= 0) throw PreconditionError("band matrix needs at least 1 band");
    if (values_.size() != rows_ * static_cast<std::size_t>(bands_))
        throw PreconditionError("band matrix size mismatch");
    for (double v : values_) {
        if (!std::isfinite(v)) throw DataError("band matrix contains NaN/Inf");
    }
}

BandMatrix BandMatrix::from_cube(const HyperCube& cube, std::size_t row_cap) {
    std::size_t total = static_cast<std::size_t>(cube.height()) * cube.width();
    std::size_t stride = subsample_stride(total, row_cap);
    std::size_t rows = (total + stride - 1) / stride;
    int bands = cube.bands();
    std::vector<double> values(rows * static_cast<std::size_t>(bands));
    const float* src = cube.data().data();
    for (std::size_t r = 0; r < rows; ++r) {
        const float* px = src + (r * stride) * static_cast<std::size_t>(bands);
        for (int b = 0; b < bands; ++b)
            values[r * static_cast<std::size_t>(bands) + static_cast<std::size_t>(b)] = px[b];
    }
    return BandMatrix(std::move(values), rows, bands);
}

BandMatrix BandMatrix::from_patch_set(const LabeledPatchSet& set, std::size_t row_cap) {
    std::size_t total = static_cast<std::size_t>(set.size()) * set.pixels_per_patch();
    std::size_t stride = subsample_stride(total, row_cap);
    std::size_t rows = (total + stride - 1) / stride;
    int bands = set.bands();
    std::vector<double> values(rows * static_cast<std::size_t>(bands));
    const float* src = set.data().data();
    for (std::size_t r = 0; r < rows; ++r) {
        const float* px = src + (r * stride) * static_cast<std::size_t>(bands);
        for (int b = 0; b < bands; ++b)
            values[r * static_cast<std::size_t>(bands) + static_cast<std::size_t>(b)] = px[b];
    }
    return BandMatrix(std::move(values), rows, bands);
}

}  // namespace bandpick
