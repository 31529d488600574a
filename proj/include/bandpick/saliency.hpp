#ifndef BANDPICK_SALIENCY_HPP_
#define BANDPICK_SALIENCY_HPP_

#include <string>
#include <vector>

#include "bandpick/band_matrix.hpp"
#include "bandpick/datacube.hpp"

namespace bandpick {

inline constexpr int kDefaultBitDepth = 14;

/// Candidate bands sorted by descending entropy, ties broken by ascending
/// band index. A permutation of the input candidate list.
struct EntropyRanking {
    std::vector<int> band_index;
    std::vector<double> entropy_bits;
};

/// Information entropy of column i in bits: the column is quantized into
/// 2^bit_depth equal-width bins spanning its own [min, max]; empty bins
/// contribute nothing. A constant column has entropy 0.
double band_entropy(const BandMatrix& m, int i, int bit_depth = kDefaultBitDepth);

EntropyRanking rank_by_entropy(const BandMatrix& m, const std::vector<int>& candidates,
                               int bit_depth = kDefaultBitDepth);

/// Columns: band_index, wavelength_nm, entropy_bits, rank.
void write_ranking_csv(const EntropyRanking& ranking, const WavelengthAxis& axis,
                       const std::string& path);

}  // namespace bandpick

#endif  // BANDPICK_SALIENCY_HPP_
