#ifndef SECTORNET_HISTOGRAM_HPP_
#define SECTORNET_HISTOGRAM_HPP_

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/errors.hpp"
#include "sectornet/spectra.hpp"
#include "sectornet/text.hpp"

namespace sectornet {

/// Density histogram: density[k] * (edges[k+1] - edges[k]) sums to 1.
struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;
    std::size_t count = 0;
    std::string rule; // "freedman-diaconis", "sturges" or "degenerate"

    std::size_t bins() const { return density.size(); }
    double center(std::size_t k) const { return 0.5 * (edges[k] + edges[k + 1]); }
};

inline constexpr std::size_t kMaxHistogramBins = 10000;

namespace detail {

inline double quantile_sorted(const std::vector<double>& v, double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

} // namespace detail

/// Bin width 2 IQR n^(-1/3) (Freedman-Diaconis). Falls back to Sturges' ceil(log2 n) + 1
/// equal bins when the IQR vanishes, and to one unit-width bin when all values coincide.
/// Bin count is capped at kMaxHistogramBins.
inline Histogram density_histogram(std::vector<double> values) {
    if (values.empty()) throw DataError("histogram of an empty sample");
    for (double v : values)
        if (!std::isfinite(v)) throw DataError("histogram sample contains non-finite values");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    const double lo = values.front();
    const double hi = values.back();
    const double range = hi - lo;

    Histogram h;
    h.count = n;
    std::size_t bins = 1;
    if (range <= 0.0) {
        h.rule = "degenerate";
        h.edges = {lo - 0.5, lo + 0.5};
    } else {
        const double iqr = detail::quantile_sorted(values, 0.75) - detail::quantile_sorted(values, 0.25);
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
        if (width > 0.0) {
            h.rule = "freedman-diaconis";
            bins = static_cast<std::size_t>(std::ceil(range / width));
        } else {
            h.rule = "sturges";
            bins = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
        }
        bins = std::clamp<std::size_t>(bins, 1, kMaxHistogramBins);
        h.edges.resize(bins + 1);
        for (std::size_t k = 0; k <= bins; ++k) h.edges[k] = lo + range * static_cast<double>(k) / static_cast<double>(bins);
        h.edges.back() = hi;
    }
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto k = static_cast<std::size_t>(std::upper_bound(h.edges.begin(), h.edges.end(), v) - h.edges.begin());
        k = k == 0 ? 0 : std::min(k - 1, bins - 1);
        ++counts[k];
    }
    h.density.resize(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        h.density[k] = static_cast<double>(counts[k]) / (static_cast<double>(n) * (h.edges[k + 1] - h.edges[k]));
    }
    return h;
}

inline std::vector<double> off_diagonal(const Eigen::MatrixXd& m) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m.rows() * (m.rows() - 1) / 2));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) out.push_back(m(i, j));
    return out;
}

/// CSV of the c_ij densities for the full matrix and its three modes (upper triangle only).
inline std::string correlation_distribution_csv(const CorrelationSpectrum& spec, const ModeDecomposition& modes) {
    std::ostringstream out;
    out << "series,bin_left,bin_right,density\n";
    const std::pair<const char*, const Eigen::MatrixXd*> series[] = {
        {"original", &spec.corr}, {"random", &modes.random}, {"market", &modes.market}, {"sector", &modes.sector}};
    for (const auto& [name, m] : series) {
        const auto h = density_histogram(off_diagonal(*m));
        for (std::size_t k = 0; k < h.bins(); ++k) {
            out << name << ',' << text::format_double(h.edges[k]) << ',' << text::format_double(h.edges[k + 1]) << ','
                << text::format_double(h.density[k]) << '\n';
        }
    }
    return out.str();
}

/// CSV of the empirical eigenvalue density with the Marchenko-Pastur density at each bin centre.
inline std::string eigenvalue_distribution_csv(const CorrelationSpectrum& spec) {
    if (!spec.decomposed()) throw UsageError("eigenvalue distribution needs a decomposed spectrum");
    std::vector<double> values(spec.eigenvalues.data(), spec.eigenvalues.data() + spec.eigenvalues.size());
    const auto h = density_histogram(values);
    std::ostringstream out;
    out << "bin_left,bin_right,center,density,mp_density\n";
    for (std::size_t k = 0; k < h.bins(); ++k) {
        const double mp = spec.q > 1.0 ? mp_density(h.center(k), spec.q) : 0.0;
        out << text::format_double(h.edges[k]) << ',' << text::format_double(h.edges[k + 1]) << ','
            << text::format_double(h.center(k)) << ',' << text::format_double(h.density[k]) << ','
            << text::format_double(mp) << '\n';
    }
    return out.str();
}

} // namespace sectornet

#endif // SECTORNET_HISTOGRAM_HPP_
