#ifndef SECTORNET_SECTORMETRICS_HPP_
#define SECTORNET_SECTORMETRICS_HPP_

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/errors.hpp"
#include "sectornet/ingest.hpp"
#include "sectornet/pmfg.hpp"
#include "sectornet/spectra.hpp"
#include "sectornet/text.hpp"

namespace sectornet {

enum class CorrelationBasis { SectorMode, Raw };

inline const char* to_string(CorrelationBasis b) { return b == CorrelationBasis::SectorMode ? "sector_mode" : "raw"; }

/// Correlations summed and averaged over graph edges inside one sector and across sectors.
/// An average is empty when its edge count is zero.
struct SectorCorrelationSummary {
    std::optional<double> avg_in;
    std::optional<double> avg_be;
    double sum_in = 0.0;
    double sum_be = 0.0;
    std::size_t n_in = 0;
    std::size_t n_be = 0;
    CorrelationBasis basis = CorrelationBasis::SectorMode;
    PmfgMethod method = PmfgMethod::Distance;
};

namespace detail {

template <class SameGroup>
SectorCorrelationSummary edge_partition_sums(const PlanarGraph& graph, const Eigen::MatrixXd& matrix, SameGroup same,
                                             CorrelationBasis basis) {
    if (matrix.rows() != static_cast<Eigen::Index>(graph.n) || matrix.cols() != matrix.rows()) {
        throw UsageError("matrix does not match graph size");
    }
    SectorCorrelationSummary s;
    s.basis = basis;
    s.method = graph.method;
    for (const auto& e : graph.edges) {
        const double c = matrix(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j));
        if (same(e.i, e.j)) {
            s.sum_in += c;
            ++s.n_in;
        } else {
            s.sum_be += c;
            ++s.n_be;
        }
    }
    if (s.n_in) s.avg_in = s.sum_in / static_cast<double>(s.n_in);
    if (s.n_be) s.avg_be = s.sum_be / static_cast<double>(s.n_be);
    return s;
}

} // namespace detail

/// Splits graph edges by whether both endpoints share a GICS code. Sums run in edge order.
inline SectorCorrelationSummary sector_correlations(const PlanarGraph& graph, const Eigen::MatrixXd& matrix,
                                                    const std::vector<std::string>& sector_codes,
                                                    CorrelationBasis basis = CorrelationBasis::SectorMode) {
    if (sector_codes.size() != graph.n) throw UsageError("every node needs a sector code");
    for (const auto& code : sector_codes)
        if (code.empty()) throw DataError("node without sector label");
    return detail::edge_partition_sums(
        graph, matrix, [&](std::size_t i, std::size_t j) { return sector_codes[i] == sector_codes[j]; }, basis);
}

/// Overlay grouping: "in" edges join two SH stocks, "between" edges join exactly one.
/// Edges with no SH endpoint are ignored.
inline SectorCorrelationSummary overlay_correlations(const PlanarGraph& graph, const Eigen::MatrixXd& matrix,
                                                     const std::vector<bool>& sh,
                                                     CorrelationBasis basis = CorrelationBasis::SectorMode) {
    if (sh.size() != graph.n) throw UsageError("every node needs an SH flag");
    PlanarGraph touching = graph;
    touching.edges.clear();
    for (const auto& e : graph.edges)
        if (sh[e.i] || sh[e.j]) touching.edges.push_back(e);
    return detail::edge_partition_sums(
        touching, matrix, [&](std::size_t i, std::size_t j) { return sh[i] && sh[j]; }, basis);
}

/// One row of the method comparison: the same PMFG scored on sector-mode and raw correlations.
struct MethodComparison {
    PmfgMethod method = PmfgMethod::Distance;
    SectorCorrelationSummary sector_mode;
    SectorCorrelationSummary raw;
};

/// Builds the PMFG on c^sector with each method and scores it on both bases.
inline std::vector<MethodComparison> compare_methods(const CorrelationSpectrum& spec, const ModeDecomposition& modes,
                                                     const std::vector<std::string>& sector_codes) {
    std::vector<MethodComparison> rows;
    for (auto method : {PmfgMethod::Distance, PmfgMethod::Absolute}) {
        const auto graph = build_pmfg(modes.sector, method);
        rows.push_back({method, sector_correlations(graph, modes.sector, sector_codes, CorrelationBasis::SectorMode),
                        sector_correlations(graph, spec.corr, sector_codes, CorrelationBasis::Raw)});
    }
    return rows;
}

inline std::vector<MethodComparison> compare_methods(const SeriesPanel& series, const std::vector<std::string>& sector_codes,
                                                     double rmt_multiplier = 1.0) {
    const auto spec = correlation_spectrum(series);
    return compare_methods(spec, decompose_modes(spec, rmt_multiplier), sector_codes);
}

inline void write_sector_table_header(std::ostream& out) {
    out << "kind,method,sector_avg_in,sector_avg_be,sector_sum_in,sector_sum_be,raw_avg_in,raw_avg_be,raw_sum_in,"
           "raw_sum_be,n_in,n_be\n";
}

inline void write_sector_table_rows(std::ostream& out, SeriesKind kind, const std::vector<MethodComparison>& rows) {
    auto opt = [](const std::optional<double>& v) { return v ? text::format_double(*v) : std::string("NA"); };
    for (const auto& r : rows) {
        out << to_string(kind) << ',' << to_string(r.method) << ',' << opt(r.sector_mode.avg_in) << ','
            << opt(r.sector_mode.avg_be) << ',' << text::format_double(r.sector_mode.sum_in) << ','
            << text::format_double(r.sector_mode.sum_be) << ',' << opt(r.raw.avg_in) << ',' << opt(r.raw.avg_be)
            << ',' << text::format_double(r.raw.sum_in) << ',' << text::format_double(r.raw.sum_be) << ','
            << r.sector_mode.n_in << ',' << r.sector_mode.n_be << '\n';
    }
}

} // namespace sectornet

#endif // SECTORNET_SECTORMETRICS_HPP_
