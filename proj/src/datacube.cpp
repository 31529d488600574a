#include "bandpick/datacube.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>

#include "bandpick/csv.hpp"
#include "bandpick/errors.hpp"

namespace fs = std::filesystem;

namespace bandpick {

namespace {

void check_finite(const std::vector<float>& data, const std::string& context) {
    for (float v : data) {
        if (!std::isfinite(v)) throw DataError(context + ": payload contains NaN/Inf");
    }
}

int validate_labels_dense(const std::vector<int>& labels) {
    if (labels.empty()) throw DataError("patch set has no labels");
    int max_label = -1;
    for (int l : labels) {
        if (l < 0) throw DataError("negative class label " + std::to_string(l));
        max_label = std::max(max_label, l);
    }
    std::vector<char> seen(static_cast<std::size_t>(max_label) + 1, 0);
    for (int l : labels) seen[static_cast<std::size_t>(l)] = 1;
    for (int c = 0; c <= max_label; ++c) {
        if (!seen[static_cast<std::size_t>(c)])
            throw DataError("class " + std::to_string(c) + " has no patches; labels must be dense 0..C-1");
    }
    return max_label + 1;
}

// Little-endian scalar I/O. The build targets little-endian hosts; memcpy
// through a byte buffer keeps the format pinned either way.
template <typename T>
void write_le(std::ofstream& out, T value) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
bool read_le(std::ifstream& in, T& value) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) return false;
    std::memcpy(&value, buf, sizeof(T));
    return true;
}

}  // namespace

WavelengthAxis::WavelengthAxis(std::vector<double> nm) : wavelengths_nm(std::move(nm)) {
    for (std::size_t i = 1; i < wavelengths_nm.size(); ++i) {
        if (!(wavelengths_nm[i] > wavelengths_nm[i - 1]))
            throw DataError("wavelength axis must be strictly increasing");
    }
}

HyperCube::HyperCube(int height, int width, int bands, std::vector<float> data, WavelengthAxis axis)
    : height_(height), width_(width), bands_(bands), data_(std::move(data)), axis_(std::move(axis)) {
    if (height_ <= 0 || width_ <= 0 || bands_ <= 0)
        throw PreconditionError("cube dimensions must be positive");
    std::size_t expected = static_cast<std::size_t>(height_) * width_ * bands_;
    if (data_.size() != expected)
        throw TruncationError("cube payload has " + std::to_string(data_.size()) +
                              " values, expected " + std::to_string(expected));
    if (axis_.size() != bands_)
        throw DataError("wavelength axis length " + std::to_string(axis_.size()) +
                        " != band count " + std::to_string(bands_));
    check_finite(data_, "cube");
}

LabeledPatchSet::LabeledPatchSet(int patch_size, int bands, std::vector<float> data,
                                 std::vector<int> labels, WavelengthAxis axis)
    : patch_size_(patch_size), bands_(bands), data_(std::move(data)), labels_(std::move(labels)),
      axis_(std::move(axis)) {
    if (patch_size_ <= 0 || bands_ <= 0)
        throw PreconditionError("patch size and band count must be positive");
    std::size_t expected = labels_.size() * pixels_per_patch() * static_cast<std::size_t>(bands_);
    if (data_.size() != expected)
        throw TruncationError("patch data has " + std::to_string(data_.size()) +
                              " values, expected " + std::to_string(expected));
    if (axis_.size() != 0 && axis_.size() != bands_)
        throw DataError("wavelength axis length != band count");
    classes_ = validate_labels_dense(labels_);
    check_finite(data_, "patch set");
}

// --- HSC1 I/O ----------------------------------------------------------------

HyperCube load_cube(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open cube file: " + path);

    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::memcmp(magic, "HSC1", 4) != 0)
        throw FormatError(path + ": bad magic, not an HSC1 file");
    std::uint16_t version = 0;
    if (!read_le(in, version)) throw TruncationError(path + ": truncated header");
    if (version != 1)
        throw FormatError(path + ": unsupported HSC1 version " + std::to_string(version));

    std::uint32_t h = 0, w = 0, b = 0;
    if (!read_le(in, h) || !read_le(in, w) || !read_le(in, b))
        throw TruncationError(path + ": truncated header");
    if (h == 0 || w == 0 || b == 0) throw FormatError(path + ": zero dimension in header");

    std::vector<double> wavelengths(b);
    for (std::uint32_t i = 0; i < b; ++i) {
        if (!read_le(in, wavelengths[i])) throw TruncationError(path + ": truncated wavelength table");
    }

    std::size_t count = static_cast<std::size_t>(h) * w * b;
    std::vector<float> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(count * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(float)))
        throw TruncationError(path + ": payload shorter than H*W*B header dimensions");

    for (float v : payload) {
        if (!std::isfinite(v)) throw DataError(path + ": payload contains NaN/Inf");
    }
    return HyperCube(static_cast<int>(h), static_cast<int>(w), static_cast<int>(b),
                     std::move(payload), WavelengthAxis(std::move(wavelengths)));
}

void save_cube(const HyperCube& cube, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cube file: " + path);
    out.write("HSC1", 4);
    write_le<std::uint16_t>(out, 1);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.height()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.width()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(cube.bands()));
    for (int i = 0; i < cube.bands(); ++i) write_le(out, cube.axis()[i]);
    out.write(reinterpret_cast<const char*>(cube.data().data()),
              static_cast<std::streamsize>(cube.data().size() * sizeof(float)));
    if (!out) throw Error("write failed: " + path);
}

std::vector<std::vector<int>> load_label_map(const std::string& path, int expect_height,
                                             int expect_width) {
    auto rows = csv::read_file(path);
    if (static_cast<int>(rows.size()) != expect_height)
        throw DataError(path + ": label map has " + std::to_string(rows.size()) +
                        " rows, cube height is " + std::to_string(expect_height));
    std::vector<std::vector<int>> map(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (static_cast<int>(rows[r].size()) != expect_width)
            throw DataError(path + ": label map row " + std::to_string(r) + " has " +
                            std::to_string(rows[r].size()) + " columns, cube width is " +
                            std::to_string(expect_width));
        map[r].reserve(rows[r].size());
        for (const auto& cell : rows[r]) map[r].push_back(static_cast<int>(csv::to_long(cell)));
    }
    return map;
}

void save_patch_set(const LabeledPatchSet& set, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<csv::Row> rows;
    rows.push_back({"index", "label"});
    WavelengthAxis axis = set.axis();
    if (axis.size() == 0) {
        std::vector<double> nm(static_cast<std::size_t>(set.bands()));
        for (int b = 0; b < set.bands(); ++b) nm[static_cast<std::size_t>(b)] = b;
        axis = WavelengthAxis(std::move(nm));
    }
    for (int p = 0; p < set.size(); ++p) {
        std::size_t n = set.pixels_per_patch() * static_cast<std::size_t>(set.bands());
        std::vector<float> data(set.patch_data(p), set.patch_data(p) + n);
        HyperCube patch(set.patch_size(), set.patch_size(), set.bands(), std::move(data), axis);
        char name[32];
        std::snprintf(name, sizeof(name), "patch_%06d.hsc1", p);
        save_cube(patch, (fs::path(dir) / name).string());
        rows.push_back({std::to_string(p), std::to_string(set.label(p))});
    }
    csv::write_file((fs::path(dir) / "labels.csv").string(), rows);
}

LabeledPatchSet load_patch_set(const std::string& dir) {
    auto labels_path = fs::path(dir) / "labels.csv";
    auto rows = csv::read_file(labels_path.string());
    if (rows.empty() || rows[0] != csv::Row{"index", "label"})
        throw FormatError(labels_path.string() + ": expected header 'index,label'");

    std::vector<int> labels;
    std::vector<float> data;
    int patch_size = 0, bands = 0;
    WavelengthAxis axis;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != 2) throw FormatError(labels_path.string() + ": malformed row");
        long index = csv::to_long(rows[r][0]);
        if (index != static_cast<long>(r) - 1)
            throw FormatError(labels_path.string() + ": indices must be consecutive from 0");
        labels.push_back(static_cast<int>(csv::to_long(rows[r][1])));

        char name[32];
        std::snprintf(name, sizeof(name), "patch_%06ld.hsc1", index);
        HyperCube patch = load_cube((fs::path(dir) / name).string());
        if (patch.height() != patch.width())
            throw DataError(std::string(name) + ": patches must be square");
        if (patch_size == 0) {
            patch_size = patch.height();
            bands = patch.bands();
            axis = patch.axis();
        } else if (patch.height() != patch_size || patch.bands() != bands) {
            throw DataError(std::string(name) + ": patch dimensions differ from the first patch");
        }
        data.insert(data.end(), patch.data().begin(), patch.data().end());
    }
    if (labels.empty()) throw DataError(dir + ": empty patch set");
    return LabeledPatchSet(patch_size, bands, std::move(data), std::move(labels), std::move(axis));
}

// --- Preprocessing -----------------------------------------------------------

HyperCube reflectance_correct(const HyperCube& scene, const std::vector<double>& target_mean_dn,
                              const std::vector<double>& dark_dn, double rho_target) {
    int bands = scene.bands();
    if (static_cast<int>(target_mean_dn.size()) != bands ||
        static_cast<int>(dark_dn.size()) != bands)
        throw PreconditionError("target/dark vectors must have one entry per band");
    if (!(rho_target > 0.0 && rho_target <= 1.0))
        throw PreconditionError("rho_target must lie in (0, 1]");

    std::vector<double> inv_denominator(static_cast<std::size_t>(bands));
    for (int b = 0; b < bands; ++b) {
        double denom = target_mean_dn[static_cast<std::size_t>(b)] - dark_dn[static_cast<std::size_t>(b)];
        if (denom == 0.0)
            throw PreconditionError("reflectance denominator is zero at band " + std::to_string(b));
        inv_denominator[static_cast<std::size_t>(b)] = 1.0 / denom;
    }

    std::vector<float> out(scene.data().size());
    std::size_t pixels = static_cast<std::size_t>(scene.height()) * scene.width();
    const float* src = scene.data().data();
    for (std::size_t p = 0; p < pixels; ++p) {
        for (int b = 0; b < bands; ++b) {
            std::size_t idx = p * static_cast<std::size_t>(bands) + static_cast<std::size_t>(b);
            double rho = (static_cast<double>(src[idx]) - dark_dn[static_cast<std::size_t>(b)]) *
                         inv_denominator[static_cast<std::size_t>(b)] * rho_target;
            out[idx] = static_cast<float>(rho);
        }
    }
    return HyperCube(scene.height(), scene.width(), bands, std::move(out), scene.axis());
}

std::vector<double> region_mean_dn(const HyperCube& cube, int row0, int col0, int row1, int col1) {
    if (row0 < 0 || col0 < 0 || row1 > cube.height() || col1 > cube.width() || row0 >= row1 ||
        col0 >= col1)
        throw PreconditionError("region rectangle out of bounds or empty");
    std::vector<double> mean(static_cast<std::size_t>(cube.bands()), 0.0);
    for (int r = row0; r < row1; ++r)
        for (int c = col0; c < col1; ++c)
            for (int b = 0; b < cube.bands(); ++b)
                mean[static_cast<std::size_t>(b)] += cube.at(r, c, b);
    double n = static_cast<double>(row1 - row0) * (col1 - col0);
    for (auto& m : mean) m /= n;
    return mean;
}

HyperCube spectral_bin2(const HyperCube& cube) {
    if (cube.bands() < 2) throw PreconditionError("spectral_bin2 needs at least 2 bands");
    int out_bands = cube.bands() / 2;
    std::vector<double> nm(static_cast<std::size_t>(out_bands));
    for (int j = 0; j < out_bands; ++j)
        nm[static_cast<std::size_t>(j)] = 0.5 * (cube.axis()[2 * j] + cube.axis()[2 * j + 1]);

    std::size_t pixels = static_cast<std::size_t>(cube.height()) * cube.width();
    std::vector<float> out(pixels * static_cast<std::size_t>(out_bands));
    const float* src = cube.data().data();
    for (std::size_t p = 0; p < pixels; ++p) {
        const float* in_px = src + p * static_cast<std::size_t>(cube.bands());
        float* out_px = out.data() + p * static_cast<std::size_t>(out_bands);
        for (int j = 0; j < out_bands; ++j)
            out_px[j] = 0.5f * (in_px[2 * j] + in_px[2 * j + 1]);
    }
    return HyperCube(cube.height(), cube.width(), out_bands, std::move(out),
                     WavelengthAxis(std::move(nm)));
}

LabeledPatchSet extract_patches(const HyperCube& cube, const std::vector<std::vector<int>>& label_map,
                                int patch_size, int stride) {
    if (patch_size % 2 == 0 || patch_size <= 0)
        throw PreconditionError("patch size must be odd and positive");
    if (patch_size > std::min(cube.height(), cube.width()))
        throw PreconditionError("patch size exceeds cube dimensions");
    if (stride <= 0) throw PreconditionError("stride must be positive");
    if (static_cast<int>(label_map.size()) != cube.height())
        throw PreconditionError("label map height mismatch");

    int half = patch_size / 2;
    int bands = cube.bands();
    std::vector<int> labels;
    std::vector<float> data;
    for (int r = 0; r < cube.height(); r += stride) {
        if (static_cast<int>(label_map[static_cast<std::size_t>(r)].size()) != cube.width())
            throw PreconditionError("label map width mismatch at row " + std::to_string(r));
        for (int c = 0; c < cube.width(); c += stride) {
            int label = label_map[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (label < 0) continue;
            labels.push_back(label);
            for (int dr = -half; dr <= half; ++dr) {
                int rr = std::clamp(r + dr, 0, cube.height() - 1);
                for (int dc = -half; dc <= half; ++dc) {
                    int cc = std::clamp(c + dc, 0, cube.width() - 1);
                    const float* px =
                        cube.data().data() +
                        (static_cast<std::size_t>(rr) * cube.width() + cc) * static_cast<std::size_t>(bands);
                    data.insert(data.end(), px, px + bands);
                }
            }
        }
    }
    if (labels.empty()) throw DataError("label map contains no labeled pixels at this stride");
    return LabeledPatchSet(patch_size, bands, std::move(data), std::move(labels), cube.axis());
}

ZScoreParams zscore_fit(const LabeledPatchSet& set) {
    if (set.size() == 0) throw PreconditionError("cannot fit z-score on an empty set");
    int bands = set.bands();
    std::vector<double> sum(static_cast<std::size_t>(bands), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(bands), 0.0);
    const float* d = set.data().data();
    std::size_t pixels = set.data().size() / static_cast<std::size_t>(bands);
    for (std::size_t p = 0; p < pixels; ++p) {
        for (int b = 0; b < bands; ++b) {
            double v = d[p * static_cast<std::size_t>(bands) + static_cast<std::size_t>(b)];
            sum[static_cast<std::size_t>(b)] += v;
            sumsq[static_cast<std::size_t>(b)] += v * v;
        }
    }
    ZScoreParams params;
    params.mean_per_band.resize(static_cast<std::size_t>(bands));
    params.std_per_band.resize(static_cast<std::size_t>(bands));
    double n = static_cast<double>(pixels);
    for (int b = 0; b < bands; ++b) {
        double mean = sum[static_cast<std::size_t>(b)] / n;
        double var = sumsq[static_cast<std::size_t>(b)] / n - mean * mean;
        double sd = var > 0.0 ? std::sqrt(var) : 0.0;
        params.mean_per_band[static_cast<std::size_t>(b)] = mean;
        params.std_per_band[static_cast<std::size_t>(b)] = sd < kDegenerateStd ? 1.0 : sd;
    }
    return params;
}

LabeledPatchSet zscore_apply(const LabeledPatchSet& set, const ZScoreParams& params) {
    int bands = set.bands();
    if (static_cast<int>(params.mean_per_band.size()) != bands ||
        static_cast<int>(params.std_per_band.size()) != bands)
        throw PreconditionError("z-score params band count mismatch");
    std::vector<float> out(set.data().size());
    const float* d = set.data().data();
    std::size_t pixels = set.data().size() / static_cast<std::size_t>(bands);
    for (std::size_t p = 0; p < pixels; ++p) {
        for (int b = 0; b < bands; ++b) {
            std::size_t idx = p * static_cast<std::size_t>(bands) + static_cast<std::size_t>(b);
            out[idx] = static_cast<float>((d[idx] - params.mean_per_band[static_cast<std::size_t>(b)]) /
                                          params.std_per_band[static_cast<std::size_t>(b)]);
        }
    }
    return LabeledPatchSet(set.patch_size(), bands, std::move(out), set.labels(), set.axis());
}

}  // namespace bandpick
