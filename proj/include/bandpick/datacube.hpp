#ifndef BANDPICK_DATACUBE_HPP_
#define BANDPICK_DATACUBE_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace bandpick {

/// Band-to-wavelength mapping. Strictly increasing, one entry per band.
struct WavelengthAxis {
    std::vector<double> wavelengths_nm;

    WavelengthAxis() = default;
    explicit WavelengthAxis(std::vector<double> nm);

    int size() const { return static_cast<int>(wavelengths_nm.size()); }
    double operator[](int b) const { return wavelengths_nm[static_cast<std::size_t>(b)]; }
};

/// H x W x B cube, stored band-interleaved-by-pixel (row, col, band).
/// Values are reflectance or raw digital numbers. Immutable after construction.
class HyperCube {
public:
    HyperCube(int height, int width, int bands, std::vector<float> data, WavelengthAxis axis);

    int height() const { return height_; }
    int width() const { return width_; }
    int bands() const { return bands_; }
    const WavelengthAxis& axis() const { return axis_; }
    const std::vector<float>& data() const { return data_; }

    float at(int row, int col, int band) const {
        return data_[(static_cast<std::size_t>(row) * width_ + col) * bands_ + band];
    }

private:
    int height_;
    int width_;
    int bands_;
    std::vector<float> data_;
    WavelengthAxis axis_;
};

/// Fixed-size spatial patches with integer class labels in 0..classes-1.
/// Storage is (patch, row, col, band) contiguous.
class LabeledPatchSet {
public:
    LabeledPatchSet(int patch_size, int bands, std::vector<float> data, std::vector<int> labels,
                    WavelengthAxis axis = {});

    int size() const { return static_cast<int>(labels_.size()); }
    int patch_size() const { return patch_size_; }
    int bands() const { return bands_; }
    int classes() const { return classes_; }
    const std::vector<int>& labels() const { return labels_; }
    int label(int p) const { return labels_[static_cast<std::size_t>(p)]; }
    const WavelengthAxis& axis() const { return axis_; }
    const std::vector<float>& data() const { return data_; }

    std::size_t pixels_per_patch() const {
        return static_cast<std::size_t>(patch_size_) * patch_size_;
    }

    float at(int patch, int row, int col, int band) const {
        return data_[((static_cast<std::size_t>(patch) * patch_size_ + row) * patch_size_ + col) *
                         bands_ +
                     band];
    }

    const float* patch_data(int patch) const {
        return data_.data() + static_cast<std::size_t>(patch) * pixels_per_patch() * bands_;
    }

private:
    int patch_size_;
    int bands_;
    int classes_;
    std::vector<float> data_;
    std::vector<int> labels_;
    WavelengthAxis axis_;
};

/// Per-band standardization parameters. std entries are always > 0; a band
/// whose observed std falls below 1e-12 is recorded with std 1 so the
/// transformed band is zero-centered instead of NaN.
struct ZScoreParams {
    std::vector<double> mean_per_band;
    std::vector<double> std_per_band;
};

inline constexpr double kDegenerateStd = 1e-12;

// --- HSC1 cube file format -------------------------------------------------
// magic "HSC1" | u16 LE version=1 | u32 LE H, W, B | B x f64 LE wavelengths |
// H*W*B x f32 LE payload in (row, col, band) order.

HyperCube load_cube(const std::string& path);
void save_cube(const HyperCube& cube, const std::string& path);

/// H rows x W integer columns, -1 marks unlabeled pixels.
std::vector<std::vector<int>> load_label_map(const std::string& path, int expect_height,
                                             int expect_width);

/// Patch-set directory: patch_<index>.hsc1 files plus labels.csv (index,label).
void save_patch_set(const LabeledPatchSet& set, const std::string& dir);
LabeledPatchSet load_patch_set(const std::string& dir);

// --- Preprocessing operations ----------------------------------------------

/// rho = (DN_scene - DN_dark) / (DN_target - DN_dark) * rho_target, per band.
HyperCube reflectance_correct(const HyperCube& scene, const std::vector<double>& target_mean_dn,
                              const std::vector<double>& dark_dn, double rho_target);

/// Mean digital number of a rectangular region per band, e.g. over a
/// reflectance-reference panel. Rows [row0,row1), cols [col0,col1).
std::vector<double> region_mean_dn(const HyperCube& cube, int row0, int col0, int row1, int col1);

/// 2x spectral binning: output band j = mean of input bands 2j, 2j+1, with a
/// trailing odd band dropped. Wavelengths are averaged pairwise.
HyperCube spectral_bin2(const HyperCube& cube);

/// One patch per labeled pixel visited at the given stride, centered on the
/// pixel; windows leaving the image are edge-clamp padded. Labels must be
/// dense in 0..C-1 over the emitted patches.
LabeledPatchSet extract_patches(const HyperCube& cube, const std::vector<std::vector<int>>& label_map,
                                int patch_size, int stride);

ZScoreParams zscore_fit(const LabeledPatchSet& set);
LabeledPatchSet zscore_apply(const LabeledPatchSet& set, const ZScoreParams& params);

}  // namespace bandpick

#endif  // BANDPICK_DATACUBE_HPP_
