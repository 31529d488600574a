#ifndef BANDPICK_COLLINEARITY_HPP_
#define BANDPICK_COLLINEARITY_HPP_

#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "bandpick/band_matrix.hpp"
#include "bandpick/datacube.hpp"

namespace bandpick {

/// Sentinel for perfect (or zero-variance) collinearity.
inline constexpr double kVifMax = 1e12;

/// Local minima are kept only while d stays below this distance.
inline constexpr int kMaxMinimumDistance = 5;

/// VIF between two bands from an OLS fit with intercept of column i on
/// column j: 1/(1 - R^2). Returns kVifMax when R^2 >= 1 - 1e-12 or when a
/// column has zero variance (a constant band is maximally redundant).
double vif_pair(const BandMatrix& m, int i, int j);

/// Symmetric lazy cache of pairwise VIF values. Fills are exactly-once and
/// idempotent, so the scan may run band-parallel; fills() counts the OLS
/// fits actually performed.
class VifTable {
public:
    explicit VifTable(int bands) : bands_(bands) {}

    /// Returns the cached value or computes it once via vif_pair.
    double get(const BandMatrix& m, int i, int j);

    int bands() const { return bands_; }
    std::size_t fills() const;

private:
    int bands_;
    mutable std::mutex mutex_;
    std::map<std::pair<int, int>, std::shared_future<double>> entries_;
    std::size_t fills_ = 0;
};

/// Per-band scan distances and the pre-selected candidate bands.
struct IbraResult {
    double theta = 0.0;
    std::vector<int> d_left;
    std::vector<int> d_right;
    std::vector<int> d;           // |d_left - d_right|
    std::vector<int> candidates;  // strictly increasing band indices
};

/// Inter-Band Redundancy Analysis. For each band x, d_left[x] counts the
/// consecutive neighbors x-1, x-2, ... whose VIF with x exceeds theta,
/// stopping at the first neighbor at or below theta or at the spectrum edge;
/// d_right mirrors it. Candidates are the local minima of d with d < 5.
/// A caller-held VifTable may be passed to reuse fits across thresholds.
IbraResult interband_redundancy(const BandMatrix& m, double theta, VifTable* table = nullptr);

/// Local minima of a distance vector under the plateau rule: a maximal run of
/// equal values flanked on both sides by larger values is a minimum and is
/// reported at its leftmost index; endpoints are never minima; when the whole
/// vector is one constant run, every interior index is a minimum. Only
/// minima with value < 5 are kept.
std::vector<int> local_minima(const std::vector<int>& d);

/// One row per band: band_index, wavelength_nm, d_left, d_right, d,
/// is_candidate. This is the data behind the spectral-index-vs-d plot.
void write_ibra_csv(const IbraResult& result, const WavelengthAxis& axis, const std::string& path);
IbraResult read_ibra_csv(const std::string& path, std::vector<double>* wavelengths = nullptr);

}  // namespace bandpick

#endif  // BANDPICK_COLLINEARITY_HPP_
