#include <gtest/gtest.h>

#include "sectornet/community.hpp"
#include "sectornet/spectra.hpp"
#include "sectornet/synthetic.hpp"
#include "support/oracles.hpp"

using namespace sectornet;

TEST(Synthetic, ShapeCalendarAndLabels) {
    SyntheticSpec s;
    s.n_stocks = 10;
    s.n_days = 30;
    s.n_sectors = 3;
    const auto syn = generate_synthetic(s);
    const auto& p = syn.panel;
    EXPECT_EQ(p.n(), 10u);
    EXPECT_EQ(p.length(), 30u);
    EXPECT_EQ(p.tickers.front(), "S0");
    EXPECT_EQ(syn.sector_of, (std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 2, 2, 2}));
    EXPECT_EQ(p.sectors.at("S4").code, "MA");
    for (const auto& d : p.dates) EXPECT_TRUE(is_weekday(d));
    EXPECT_EQ(format_date(p.dates.front()), "2007-10-08");
    EXPECT_FALSE(p.missing.any());
    EXPECT_TRUE((p.prices.col(0).array() == 100.0).all());
    EXPECT_TRUE((p.volumes.array() >= 0.0).all());
}

TEST(Synthetic, DeterministicPerSeed) {
    SyntheticSpec s;
    s.n_stocks = 12;
    s.n_days = 40;
    EXPECT_EQ(generate_synthetic(s).panel, generate_synthetic(s).panel);
    auto t = s;
    t.seed = 2;
    EXPECT_FALSE(generate_synthetic(s).panel == generate_synthetic(t).panel);
}

TEST(Synthetic, InvalidSpecs) {
    SyntheticSpec s;
    s.n_stocks = 2;
    EXPECT_THROW(generate_synthetic(s), UsageError);
    s = {};
    s.n_days = s.n_stocks;
    EXPECT_THROW(generate_synthetic(s), UsageError);
    s = {};
    s.n_sectors = 10;
    EXPECT_THROW(generate_synthetic(s), UsageError);
    s = {};
    s.noise_sigma = -1;
    EXPECT_THROW(generate_synthetic(s), UsageError);
    s = {};
    s.market_beta = s.sector_beta = s.noise_sigma = 0;
    EXPECT_THROW(generate_synthetic(s), UsageError);
}

TEST(Synthetic, NoNoiseNoMarketGivesUnitWithinSectorCorrelation) {
    SyntheticSpec s;
    s.n_stocks = 9;
    s.n_days = 50;
    s.n_sectors = 3;
    s.market_beta = 0;
    s.noise_sigma = 0;
    const auto syn = generate_synthetic(s);
    const auto c = pearson_matrix(compute_returns(syn.panel)).corr;
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
            if (syn.sector_of[i] == syn.sector_of[j]) {
                EXPECT_NEAR(c(i, j), 1.0, 1e-9);
            }
}

TEST(Synthetic, TurnoverCarriesFactorStructure) {
    SyntheticSpec s;
    s.n_stocks = 40;
    s.n_days = 400;
    s.n_sectors = 2;
    s.seed = 3;
    const auto syn = generate_synthetic(s);
    const auto c = pearson_matrix(compute_turnover(syn.panel)).corr;
    double in = 0, be = 0;
    int nin = 0, nbe = 0;
    for (Eigen::Index i = 0; i < 40; ++i)
        for (Eigen::Index j = i + 1; j < 40; ++j) {
            if (syn.sector_of[i] == syn.sector_of[j]) {
                in += c(i, j);
                ++nin;
            } else {
                be += c(i, j);
                ++nbe;
            }
        }
    EXPECT_GT(be / nbe, 0.1);        // market factor
    EXPECT_GT(in / nin, be / nbe + 0.05); // plus sector factor
}

TEST(Synthetic, NoSectorFactorRarelyShowsSectorEigenvalues) {
    // M = 0 expected; at most one eigenvalue above the band in at least 95 of 100 seeds
    int ok = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SyntheticSpec s;
        s.n_stocks = 40;
        s.n_days = 200;
        s.sector_beta = 0.0;
        s.seed = seed;
        const auto spec = correlation_spectrum(compute_returns(generate_synthetic(s).panel));
        int above = 0;
        for (Eigen::Index a = 0; a < spec.eigenvalues.size(); ++a) above += spec.eigenvalues(a) > spec.bounds.lambda_max;
        ok += above <= 1;
    }
    EXPECT_GE(ok, 95);
}

TEST(Synthetic, CommunitiesRecoverFourPlantedSectors) {
    SyntheticSpec s;
    s.n_stocks = 80;
    s.n_days = 500;
    s.n_sectors = 4;
    s.sector_beta = 1.0;
    s.seed = 21;
    const auto syn = generate_synthetic(s);
    const auto spec = correlation_spectrum(compute_returns(syn.panel));
    const auto modes = decompose_modes(spec);
    const auto graph = build_pmfg(modes.sector, PmfgMethod::Distance);
    const auto part = detect_communities(make_flow_network(graph), 1, 10);
    EXPECT_GE(oracle::adjusted_rand_index(part.assignment, syn.sector_of), 0.95);
}
