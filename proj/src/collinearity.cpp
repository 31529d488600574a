#include "bandpick/collinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "bandpick/csv.hpp"
#include "bandpick/errors.hpp"
#include "bandpick/threading.hpp"

namespace bandpick {

namespace {

bool column_constant(const BandMatrix& m, int col) {
    double first = m.at(0, col);
    for (std::size_t r = 1; r < m.rows(); ++r) {
        if (m.at(r, col) != first) return false;
    }
    return true;
}

}  // namespace

double vif_pair(const BandMatrix& m, int i, int j) {
    if (i == j) throw PreconditionError("vif_pair needs two distinct bands");
    if (i < 0 || j < 0 || i >= m.bands() || j >= m.bands())
        throw PreconditionError("band index out of range");
    if (column_constant(m, i) || column_constant(m, j)) return kVifMax;

    std::size_t n = m.rows();
    double mean_y = 0.0, mean_x = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        mean_y += m.at(r, i);
        mean_x += m.at(r, j);
    }
    mean_y /= static_cast<double>(n);
    mean_x /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, sst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double dx = m.at(r, j) - mean_x;
        double dy = m.at(r, i) - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        sst += dy * dy;
    }
    if (sxx <= 0.0 || sst <= 0.0) return kVifMax;

    double slope = sxy / sxx;
    double intercept = mean_y - slope * mean_x;
    double sse = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double resid = m.at(r, i) - intercept - slope * m.at(r, j);
        sse += resid * resid;
    }
    double r2 = 1.0 - sse / sst;
    if (r2 >= 1.0 - 1e-12) return kVifMax;
    double vif = 1.0 / (1.0 - r2);
    return std::clamp(vif, 1.0, kVifMax);
}

double VifTable::get(const BandMatrix& m, int i, int j) {
    std::pair<int, int> key{std::min(i, j), std::max(i, j)};
    std::shared_future<double> fut;
    bool compute = false;
    std::promise<double> promise;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) {
            fut = it->second;
        } else {
            fut = promise.get_future().share();
            entries_.emplace(key, fut);
            ++fills_;
            compute = true;
        }
    }
    if (compute) {
        try {
            promise.set_value(vif_pair(m, key.first, key.second));
        } catch (...) {
            promise.set_exception(std::current_exception());
        }
    }
    return fut.get();
}

std::size_t VifTable::fills() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return fills_;
}

IbraResult interband_redundancy(const BandMatrix& m, double theta, VifTable* table) {
    if (!(theta > 1.0)) throw PreconditionError("theta must exceed 1");
    if (m.bands() < 2) throw PreconditionError("interband redundancy needs at least 2 bands");

    VifTable local(m.bands());
    VifTable& vifs = table ? *table : local;
    if (vifs.bands() != m.bands()) throw PreconditionError("VifTable band count mismatch");

    int bands = m.bands();
    IbraResult result;
    result.theta = theta;
    result.d_left.assign(static_cast<std::size_t>(bands), 0);
    result.d_right.assign(static_cast<std::size_t>(bands), 0);
    result.d.assign(static_cast<std::size_t>(bands), 0);

    auto scan = [&](int band, int step) {
        int t = 1;
        for (;;) {
            int neighbor = band + step * t;
            if (neighbor < 0 || neighbor >= bands) return t - 1;
            if (vifs.get(m, band, neighbor) <= theta) return t - 1;
            ++t;
        }
    };

    parallel_for(static_cast<std::size_t>(bands), [&](std::size_t x) {
        int band = static_cast<int>(x);
        result.d_left[x] = scan(band, -1);
        result.d_right[x] = scan(band, +1);
        result.d[x] = std::abs(result.d_left[x] - result.d_right[x]);
    });

    result.candidates = local_minima(result.d);
    return result;
}

std::vector<int> local_minima(const std::vector<int>& d) {
    if (d.empty()) throw PreconditionError("local_minima needs a non-empty vector");
    int n = static_cast<int>(d.size());
    std::vector<int> minima;

    bool all_equal = std::all_of(d.begin(), d.end(), [&](int v) { return v == d[0]; });
    if (all_equal) {
        // A constant vector is one run with no flanking values: every interior
        // point ties for minimum.
        if (d[0] < kMaxMinimumDistance) {
            for (int x = 1; x + 1 < n; ++x) minima.push_back(x);
        }
        return minima;
    }

    int i = 0;
    while (i < n) {
        int j = i;
        while (j + 1 < n && d[static_cast<std::size_t>(j + 1)] == d[static_cast<std::size_t>(i)]) ++j;
        int v = d[static_cast<std::size_t>(i)];
        if (i > 0 && j < n - 1 && d[static_cast<std::size_t>(i - 1)] > v &&
            d[static_cast<std::size_t>(j + 1)] > v && v < kMaxMinimumDistance) {
            minima.push_back(i);
        }
        i = j + 1;
    }
    return minima;
}

void write_ibra_csv(const IbraResult& result, const WavelengthAxis& axis, const std::string& path) {
    int bands = static_cast<int>(result.d.size());
    if (axis.size() != bands) throw PreconditionError("axis length != band count in IBRA result");
    std::vector<csv::Row> rows;
    rows.push_back({"band_index", "wavelength_nm", "d_left", "d_right", "d", "is_candidate"});
    std::vector<char> is_candidate(static_cast<std::size_t>(bands), 0);
    for (int c : result.candidates) is_candidate[static_cast<std::size_t>(c)] = 1;
    for (int b = 0; b < bands; ++b) {
        rows.push_back({std::to_string(b), csv::format_double(axis[b]),
                        std::to_string(result.d_left[static_cast<std::size_t>(b)]),
                        std::to_string(result.d_right[static_cast<std::size_t>(b)]),
                        std::to_string(result.d[static_cast<std::size_t>(b)]),
                        is_candidate[static_cast<std::size_t>(b)] ? "1" : "0"});
    }
    csv::write_file(path, rows);
}

IbraResult read_ibra_csv(const std::string& path, std::vector<double>* wavelengths) {
    auto rows = csv::read_file(path);
    if (rows.empty() ||
        rows[0] != csv::Row{"band_index", "wavelength_nm", "d_left", "d_right", "d", "is_candidate"})
        throw FormatError(path + ": not an IBRA CSV (unexpected header)");
    IbraResult result;
    if (wavelengths) wavelengths->clear();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 6) throw FormatError(path + ": malformed IBRA CSV row");
        if (csv::to_long(row[0]) != static_cast<long>(r) - 1)
            throw FormatError(path + ": band indices must be consecutive from 0");
        if (wavelengths) wavelengths->push_back(csv::to_double(row[1]));
        result.d_left.push_back(static_cast<int>(csv::to_long(row[2])));
        result.d_right.push_back(static_cast<int>(csv::to_long(row[3])));
        result.d.push_back(static_cast<int>(csv::to_long(row[4])));
        if (csv::to_long(row[5]) != 0) result.candidates.push_back(static_cast<int>(r) - 1);
    }
    return result;
}

}  // namespace bandpick
