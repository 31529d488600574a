#ifndef BANDPICK_BAND_MATRIX_HPP_
#define BANDPICK_BAND_MATRIX_HPP_

#include <cstddef>
#include <vector>

#include "bandpick/datacube.hpp"

namespace bandpick {

inline constexpr std::size_t kDefaultSubsampleCap = 100000;

/// P pixel samples (rows) by B bands (columns), row-major. Immutable.
///
/// When the source holds more than `row_cap` pixels, a deterministic
/// index-stride subsample brings the row count down to at most the cap;
/// VIF and entropy estimates stabilize far below full pixel counts.
class BandMatrix {
public:
    BandMatrix(std::vector<double> values, std::size_t rows, int bands);

    static BandMatrix from_cube(const HyperCube& cube, std::size_t row_cap = kDefaultSubsampleCap);
    static BandMatrix from_patch_set(const LabeledPatchSet& set,
                                     std::size_t row_cap = kDefaultSubsampleCap);

    std::size_t rows() const { return rows_; }
    int bands() const { return bands_; }

    double at(std::size_t row, int band) const {
        return values_[row * static_cast<std::size_t>(bands_) + static_cast<std::size_t>(band)];
    }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
    std::size_t rows_;
    int bands_;
};

}  // namespace bandpick

#endif  // BANDPICK_BAND_MATRIX_HPP_
