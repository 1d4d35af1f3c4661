#ifndef SECTORNET_SPECTRA_HPP_
#define SECTORNET_SPECTRA_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/errors.hpp"
#include "sectornet/ingest.hpp"

namespace sectornet {

/// Marchenko-Pastur support of the eigenvalues of a random correlation matrix.
struct RmtBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
};

/// Correlation matrix of N series of length L plus (once completed) its spectrum.
struct CorrelationSpectrum {
    Eigen::MatrixXd corr;
    Eigen::VectorXd sigmas;
    Eigen::VectorXd eigenvalues;  // descending
    Eigen::MatrixXd eigenvectors; // column a pairs with eigenvalues[a]
    std::vector<std::string> labels;
    std::size_t length = 0; // L, number of observations per series
    double q = 0.0;         // L / N
    RmtBounds bounds;

    std::size_t n() const { return static_cast<std::size_t>(corr.rows()); }
    bool decomposed() const { return eigenvalues.size() == corr.rows() && corr.rows() > 0; }
};

/// c = random + market + sector. `sector_count` is M, the eigenvalues above the
/// noise band other than the largest one.
struct ModeDecomposition {
    Eigen::MatrixXd random;
    Eigen::MatrixXd market;
    Eigen::MatrixXd sector;
    std::size_t sector_count = 0;
    double threshold = 0.0;
};

/// Closed-form band edges 1 + 1/q -/+ 2 sqrt(1/q); no validity check on q.
inline RmtBounds mp_edges(double q) {
    const double inv = 1.0 / q;
    const double root = 2.0 * std::sqrt(inv);
    return {1.0 + inv - root, 1.0 + inv + root};
}

/// Noise band for N series of length L. Requires Q = L/N > 1.
inline RmtBounds mp_bounds(std::size_t n, std::size_t length) {
    if (n == 0) throw UsageError("mp_bounds: N must be positive");
    if (length <= n) {
        throw NumericalError("Marchenko-Pastur bounds need L > N (got N=" + std::to_string(n) +
                             ", L=" + std::to_string(length) + ")");
    }
    return mp_edges(static_cast<double>(length) / static_cast<double>(n));
}

/// Limiting eigenvalue density of a random correlation matrix with aspect ratio q > 1.
inline double mp_density(double lambda, double q) {
    if (!(q > 1.0)) throw NumericalError("mp_density requires Q > 1");
    const auto [lo, hi] = mp_edges(q);
    if (lambda <= lo || lambda >= hi) return 0.0;
    return q / (2.0 * std::numbers::pi) * std::sqrt((hi - lambda) * (lambda - lo)) / lambda;
}

/// Pearson correlation with population (1/L) moments. Rows of `series` are the series.
inline CorrelationSpectrum pearson_matrix(const Eigen::MatrixXd& series, std::vector<std::string> labels = {}) {
    const auto n = series.rows();
    const auto l = series.cols();
    if (n < 2) throw DataError("correlation needs at least 2 series");
    if (l < 2) throw DataError("correlation needs at least 2 observations per series");
    if (labels.empty()) {
        for (Eigen::Index i = 0; i < n; ++i) labels.push_back("S" + std::to_string(i));
    }
    if (static_cast<Eigen::Index>(labels.size()) != n) throw UsageError("label count does not match series count");

    CorrelationSpectrum spec;
    spec.labels = std::move(labels);
    spec.length = static_cast<std::size_t>(l);
    spec.q = static_cast<double>(l) / static_cast<double>(n);
    spec.sigmas.resize(n);

    Eigen::MatrixXd z(n, l);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mean = series.row(i).mean();
        z.row(i) = series.row(i).array() - mean;
        const double sigma = std::sqrt(z.row(i).squaredNorm() / static_cast<double>(l));
        // Relative test so that a constant series polluted by rounding still counts as constant.
        const double scale = series.row(i).cwiseAbs().maxCoeff();
        if (!(sigma > 1e-14 * std::max(scale, 1e-300)) || !std::isfinite(sigma)) {
            throw NumericalError("zero-variance series for " + spec.labels[static_cast<std::size_t>(i)] +
                                 "; correlation undefined");
        }
        spec.sigmas(i) = sigma;
        z.row(i) /= sigma;
    }
    spec.corr = (z * z.transpose()) / static_cast<double>(l);
    for (Eigen::Index i = 0; i < n; ++i) {
        spec.corr(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double c = std::clamp(0.5 * (spec.corr(i, j) + spec.corr(j, i)), -1.0, 1.0);
            spec.corr(i, j) = c;
            spec.corr(j, i) = c;
        }
    }
    return spec;
}

inline CorrelationSpectrum pearson_matrix(const SeriesPanel& series) {
    return pearson_matrix(series.values, series.tickers);
}

/// Fills the descending spectrum. Each eigenvector's first non-negligible component is positive.
inline void eigendecompose(CorrelationSpectrum& spec) {
    const auto& c = spec.corr;
    if (c.rows() != c.cols() || c.rows() == 0) throw UsageError("eigendecompose needs a non-empty square matrix");
    const double asym = (c - c.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10) throw NumericalError("matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed to converge");

    const auto n = c.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& values = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values(a) > values(b); });

    spec.eigenvalues.resize(n);
    spec.eigenvectors.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto src = order[static_cast<std::size_t>(a)];
        spec.eigenvalues(a) = values(src);
        Eigen::VectorXd u = solver.eigenvectors().col(src);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(u(k)) > 1e-12) {
                if (u(k) < 0.0) u = -u;
                break;
            }
        }
        spec.eigenvectors.col(a) = u;
    }
    if (spec.length > static_cast<std::size_t>(n)) spec.bounds = mp_bounds(static_cast<std::size_t>(n), spec.length);
}

inline CorrelationSpectrum correlation_spectrum(const SeriesPanel& series) {
    auto spec = pearson_matrix(series);
    eigendecompose(spec);
    return spec;
}

/// Splits C into the largest-eigenvalue market mode, the sector mode of remaining
/// eigenvalues above `multiplier * lambda_max`, and the in-band random mode.
inline ModeDecomposition decompose_modes(const CorrelationSpectrum& spec, double multiplier = 1.0) {
    if (!spec.decomposed()) throw UsageError("decompose_modes needs a completed eigendecomposition");
    if (!(spec.bounds.lambda_max > 0.0)) {
        throw NumericalError("noise band undefined (needs L > N; got N=" + std::to_string(spec.n()) +
                             ", L=" + std::to_string(spec.length) + ")");
    }
    if (!(multiplier > 0.0)) throw UsageError("RMT threshold multiplier must be positive");
    const auto n = spec.corr.rows();
    ModeDecomposition modes;
    modes.threshold = multiplier * spec.bounds.lambda_max;
    modes.random = Eigen::MatrixXd::Zero(n, n);
    modes.sector = Eigen::MatrixXd::Zero(n, n);
    const auto& u = spec.eigenvectors;
    modes.market = spec.eigenvalues(0) * u.col(0) * u.col(0).transpose();
    for (Eigen::Index a = 1; a < n; ++a) {
        const double lambda = spec.eigenvalues(a);
        if (lambda > modes.threshold) {
            modes.sector.noalias() += lambda * u.col(a) * u.col(a).transpose();
            ++modes.sector_count;
        } else {
            modes.random.noalias() += lambda * u.col(a) * u.col(a).transpose();
        }
    }
    return modes;
}

/// Row of the eigenvalue summary table: largest/smallest eigenvalue, band, M.
struct EigenSummary {
    double lambda_largest = 0.0;
    double lambda_smallest = 0.0;
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    std::size_t sector_count = 0;
};

inline EigenSummary eigen_summary(const CorrelationSpectrum& spec, const ModeDecomposition& modes) {
    return {spec.eigenvalues(0), spec.eigenvalues(spec.eigenvalues.size() - 1), spec.bounds.lambda_max,
            spec.bounds.lambda_min, modes.sector_count};
}

} // namespace sectornet

#endif // SECTORNET_SPECTRA_HPP_
