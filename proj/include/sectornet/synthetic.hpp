#ifndef SECTORNET_SYNTHETIC_HPP_
#define SECTORNET_SYNTHETIC_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sectornet/date.hpp"
#include "sectornet/errors.hpp"
#include "sectornet/ingest.hpp"

namespace sectornet {

/// Factor model r_i(t) = market_beta m(t) + sector_beta s_g(i)(t) + noise_sigma e_i(t).
struct SyntheticSpec {
    std::size_t n_stocks = 120;
    std::size_t n_days = 600;
    std::size_t n_sectors = 4;
    double market_beta = 0.7;
    double sector_beta = 0.5;
    double noise_sigma = 1.0;
    std::uint64_t seed = 1;
    Date start = Date{std::chrono::year{2007}, std::chrono::month{10}, std::chrono::day{8}};
    double return_scale = 0.01;  // daily log-return units per factor unit
    double turnover_level = 0.01; // median daily turnover
    double turnover_scale = 0.25; // log-turnover units per factor unit

    friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

struct SyntheticPanel {
    MarketPanel panel;
    std::vector<std::size_t> sector_of; // planted group of each row, 0-based
};

inline void validate(const SyntheticSpec& spec) {
    if (spec.n_stocks < 3) throw UsageError("synthetic panel needs at least 3 stocks");
    if (spec.n_days <= spec.n_stocks) throw UsageError("synthetic panel needs n_days > n_stocks");
    if (spec.n_sectors < 1 || spec.n_sectors > std::size(kGicsSectors)) {
        throw UsageError("n_sectors must lie in [1, " + std::to_string(std::size(kGicsSectors)) + "]");
    }
    if (spec.n_sectors > spec.n_stocks) throw UsageError("more sectors than stocks");
    if (!(spec.market_beta >= 0.0) || !(spec.sector_beta >= 0.0) || !(spec.noise_sigma >= 0.0)) {
        throw UsageError("factor loadings and noise must be non-negative");
    }
    if (spec.market_beta == 0.0 && spec.sector_beta == 0.0 && spec.noise_sigma == 0.0) {
        throw UsageError("all factor loadings are zero; series would be constant");
    }
    if (!spec.start.ok()) throw UsageError("invalid start date");
}

/// Contiguous, near-equal sector blocks: the first (n mod k) sectors get one extra stock.
inline std::vector<std::size_t> planted_sectors(std::size_t n_stocks, std::size_t n_sectors) {
    std::vector<std::size_t> out(n_stocks);
    const auto base = n_stocks / n_sectors;
    const auto extra = n_stocks % n_sectors;
    std::size_t i = 0;
    for (std::size_t g = 0; g < n_sectors; ++g) {
        const auto size = base + (g < extra ? 1 : 0);
        for (std::size_t k = 0; k < size; ++k) out[i++] = g;
    }
    return out;
}

/// Generates prices and volumes on a weekday calendar. Prices start at 100 and follow the
/// factor-model log returns; turnover follows an independent draw of the same factor model.
inline SyntheticPanel generate_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto n = static_cast<Eigen::Index>(spec.n_stocks);
    const auto l = static_cast<Eigen::Index>(spec.n_days);
    const auto k = static_cast<Eigen::Index>(spec.n_sectors);

    SyntheticPanel out;
    out.sector_of = planted_sectors(spec.n_stocks, spec.n_sectors);
    auto& p = out.panel;

    auto width = std::to_string(spec.n_stocks - 1).size();
    for (std::size_t i = 0; i < spec.n_stocks; ++i) {
        auto id = std::to_string(i);
        p.tickers.push_back("S" + std::string(width - id.size(), '0') + id);
        p.sectors[p.tickers.back()] = SectorLabel{kGicsSectors[out.sector_of[i]].code, false};
    }
    Date d = spec.start;
    while (!is_weekday(d)) d = next_day(d);
    for (std::size_t t = 0; t < spec.n_days; ++t) {
        p.dates.push_back(d);
        do d = next_day(d);
        while (!is_weekday(d));
    }

    auto factor_draws = [&](Eigen::MatrixXd& loadings) {
        // loadings(i, t) = market + sector + noise, drawn day by day
        Eigen::VectorXd sector(k);
        for (Eigen::Index t = 0; t < loadings.cols(); ++t) {
            const double market = normal(rng);
            for (Eigen::Index g = 0; g < k; ++g) sector(g) = normal(rng);
            for (Eigen::Index i = 0; i < n; ++i) {
                loadings(i, t) = spec.market_beta * market +
                                 spec.sector_beta * sector(static_cast<Eigen::Index>(out.sector_of[static_cast<std::size_t>(i)])) +
                                 spec.noise_sigma * normal(rng);
            }
        }
    };

    Eigen::MatrixXd returns(n, l - 1);
    factor_draws(returns);
    Eigen::MatrixXd activity(n, l);
    factor_draws(activity);

    p.prices.resize(n, l);
    p.volumes.resize(n, l);
    p.shares_outstanding.resize(n, l);
    p.missing = BoolMatrix::Constant(n, l, false);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double shares = 1e9 + 1e7 * static_cast<double>(i);
        double price = 100.0;
        for (Eigen::Index t = 0; t < l; ++t) {
            if (t > 0) price *= std::exp(spec.return_scale * returns(i, t - 1));
            p.prices(i, t) = price;
            p.shares_outstanding(i, t) = shares;
            const double turnover = spec.turnover_level * std::exp(spec.turnover_scale * activity(i, t));
            p.volumes(i, t) = std::round(turnover * shares);
        }
    }
    return out;
}

} // namespace sectornet

#endif // SECTORNET_SYNTHETIC_HPP_
