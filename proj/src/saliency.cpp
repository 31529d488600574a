#include "bandpick/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bandpick/csv.hpp"
#include "bandpick/errors.hpp"
#include "bandpick/threading.hpp"

namespace bandpick {

double band_entropy(const BandMatrix& m, int i, int bit_depth) {
    if (i < 0 || i >= m.bands()) throw PreconditionError("band index out of range");
    if (bit_depth < 1 || bit_depth > 16) throw PreconditionError("bit depth must lie in [1, 16]");

    std::size_t n = m.rows();
    double lo = m.at(0, i), hi = m.at(0, i);
    for (std::size_t r = 1; r < n; ++r) {
        lo = std::min(lo, m.at(r, i));
        hi = std::max(hi, m.at(r, i));
    }
    if (lo == hi) return 0.0;  // single outcome

    const int bins = 1 << bit_depth;
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    double scale = static_cast<double>(bins) / (hi - lo);
    for (std::size_t r = 0; r < n; ++r) {
        int bin = static_cast<int>((m.at(r, i) - lo) * scale);
        bin = std::clamp(bin, 0, bins - 1);
        ++counts[static_cast<std::size_t>(bin)];
    }

    double entropy = 0.0;
    double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) * inv_n;
        entropy -= p * std::log2(p);
    }
    return entropy;
}

EntropyRanking rank_by_entropy(const BandMatrix& m, const std::vector<int>& candidates,
                               int bit_depth) {
    if (candidates.empty()) throw PreconditionError("candidate list is empty");
    std::set<int> unique(candidates.begin(), candidates.end());
    if (unique.size() != candidates.size())
        throw PreconditionError("duplicate candidate band indices");
    for (int c : candidates) {
        if (c < 0 || c >= m.bands()) throw PreconditionError("candidate band index out of range");
    }

    std::vector<double> entropies(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t k) {
        entropies[k] = band_entropy(m, candidates[k], bit_depth);
    });

    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (entropies[a] != entropies[b]) return entropies[a] > entropies[b];
        return candidates[a] < candidates[b];
    });

    EntropyRanking ranking;
    ranking.band_index.reserve(candidates.size());
    ranking.entropy_bits.reserve(candidates.size());
    for (std::size_t k : order) {
        ranking.band_index.push_back(candidates[k]);
        ranking.entropy_bits.push_back(entropies[k]);
    }
    return ranking;
}

void write_ranking_csv(const EntropyRanking& ranking, const WavelengthAxis& axis,
                       const std::string& path) {
    std::vector<csv::Row> rows;
    rows.push_back({"band_index", "wavelength_nm", "entropy_bits", "rank"});
    for (std::size_t k = 0; k < ranking.band_index.size(); ++k) {
        int band = ranking.band_index[k];
        rows.push_back({std::to_string(band), csv::format_double(axis[band]),
                        csv::format_double(ranking.entropy_bits[k]), std::to_string(k)});
    }
    csv::write_file(path, rows);
}

}  // namespace bandpick
