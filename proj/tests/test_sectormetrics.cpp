#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sectornet/graph_io.hpp"
#include "sectornet/sectormetrics.hpp"
#include "sectornet/synthetic.hpp"

using namespace sectornet;

namespace {

PlanarGraph graph_of(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const Eigen::MatrixXd& m) {
    PlanarGraph g;
    g.n = n;
    g.adjacency.assign(n, {});
    for (auto [i, j] : pairs) {
        g.edges.push_back({i, j, m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), g.edges.size() + 1});
        g.adjacency[i].push_back(j);
        g.adjacency[j].push_back(i);
    }
    return g;
}

Eigen::MatrixXd random_corr(std::size_t n, std::uint64_t seed, double lo = -0.9) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, 0.9);
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(i, j) = m(j, i) = u(rng);
    return m;
}

} // namespace

TEST(SectorCorrelations, SixNodeFixtureByEnumeration) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(6, 6);
    auto set = [&](int i, int j, double v) { m(i, j) = m(j, i) = v; };
    set(0, 1, 0.8);
    set(0, 2, 0.6);
    set(1, 2, 0.7);
    set(3, 4, 0.5);
    set(4, 5, 0.9);
    set(3, 5, 0.4);
    set(2, 3, 0.1);
    set(0, 5, -0.2);
    const auto g = graph_of(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}, {0, 5}}, m);
    const std::vector<std::string> codes{"EN", "EN", "EN", "IT", "IT", "IT"};
    const auto s = sector_correlations(g, m, codes);
    EXPECT_EQ(s.n_in, 6u);
    EXPECT_EQ(s.n_be, 2u);
    EXPECT_DOUBLE_EQ(s.sum_in, 0.8 + 0.6 + 0.7 + 0.5 + 0.9 + 0.4);
    EXPECT_DOUBLE_EQ(s.sum_be, 0.1 + -0.2);
    EXPECT_EQ(*s.avg_in, s.sum_in / 6.0);
    EXPECT_EQ(*s.avg_be, s.sum_be / 2.0);
}

TEST(SectorCorrelations, DegenerateAndConstantCases) {
    const auto m = random_corr(10, 1);
    const auto g = build_pmfg(m, PmfgMethod::Distance);
    const auto one = sector_correlations(g, m, std::vector<std::string>(10, "EN"));
    EXPECT_EQ(one.n_be, 0u);
    EXPECT_FALSE(one.avg_be.has_value());
    double total = 0;
    for (const auto& e : g.edges) total += m(e.i, e.j);
    EXPECT_DOUBLE_EQ(one.sum_in, total);

    std::vector<std::string> distinct;
    for (int k = 0; k < 10; ++k) distinct.push_back("X" + std::to_string(k));
    const auto none = sector_correlations(g, m, distinct);
    EXPECT_FALSE(none.avg_in.has_value());
    std::ostringstream out;
    write_sector_table_rows(out, SeriesKind::Return, {{PmfgMethod::Distance, none, none}});
    EXPECT_NE(out.str().find("NA"), std::string::npos);

    Eigen::MatrixXd flat = Eigen::MatrixXd::Constant(10, 10, 0.3);
    flat.diagonal().setOnes();
    std::vector<std::string> two(10, "EN");
    for (int k = 5; k < 10; ++k) two[k] = "IT";
    const auto c = sector_correlations(build_pmfg(flat, PmfgMethod::Distance), flat, two);
    EXPECT_DOUBLE_EQ(*c.avg_in, 0.3);
    EXPECT_DOUBLE_EQ(*c.avg_be, 0.3);
}

TEST(SectorCorrelations, PartitionCompletenessAndRelabeling) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + rng() % 30;
        const auto m = random_corr(n, 100 + static_cast<std::uint64_t>(trial));
        const auto g = build_pmfg(m, PmfgMethod::Absolute);
        std::vector<std::string> codes(n), renamed(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = rng() % 4;
            codes[i] = kGicsSectors[k].code;
            renamed[i] = kGicsSectors[8 - k].code;
        }
        const auto a = sector_correlations(g, m, codes);
        const auto b = sector_correlations(g, m, renamed);
        EXPECT_EQ(a.n_in + a.n_be, 3 * (n - 2));
        EXPECT_EQ(a.sum_in, b.sum_in);
        EXPECT_EQ(a.sum_be, b.sum_be);
        EXPECT_EQ(a.method, PmfgMethod::Absolute);
    }
}

TEST(SectorCorrelations, RecomputedFromSerializedEdgesBitExact) {
    const auto m = random_corr(20, 4);
    const auto g = build_pmfg(m, PmfgMethod::Distance);
    std::vector<std::string> labels, codes;
    for (int k = 0; k < 20; ++k) {
        labels.push_back("T" + std::to_string(k));
        codes.push_back(kGicsSectors[k % 3].code);
    }
    std::ostringstream out;
    write_edge_list(out, g, labels);
    std::istringstream in(out.str());
    const auto back = read_edge_list(in, labels);
    const auto a = sector_correlations(g, m, codes);
    const auto b = sector_correlations(back, m, codes);
    EXPECT_EQ(a.sum_in, b.sum_in);
    EXPECT_EQ(a.sum_be, b.sum_be);
    // the weights on the serialized edges themselves reproduce the sums
    double in_sum = 0;
    for (const auto& e : back.edges)
        if (codes[e.i] == codes[e.j]) in_sum += e.weight;
    EXPECT_EQ(in_sum, a.sum_in);
}

TEST(SectorCorrelations, OverlayGrouping) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m(0, 1) = m(1, 0) = 0.5;
    m(1, 2) = m(2, 1) = 0.2;
    m(2, 3) = m(3, 2) = 0.9;
    const auto g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}}, m);
    const auto s = overlay_correlations(g, m, {true, true, false, false});
    EXPECT_EQ(s.n_in, 1u);
    EXPECT_EQ(s.n_be, 1u);
    EXPECT_DOUBLE_EQ(*s.avg_in, 0.5);
    EXPECT_DOUBLE_EQ(*s.avg_be, 0.2);
}

TEST(CompareMethods, NonNegativeMatrixGivesIdenticalRows) {
    const auto m = random_corr(15, 2, 0.0);
    const auto d = build_pmfg(m, PmfgMethod::Distance);
    const auto a = build_pmfg(m, PmfgMethod::Absolute);
    EXPECT_EQ(d.edges, a.edges);
}

TEST(CompareMethods, PlantedSectorsShowInsideAboveBetween) {
    SyntheticSpec s;
    s.n_stocks = 60;
    s.n_days = 400;
    s.n_sectors = 3;
    s.seed = 12;
    const auto syn = generate_synthetic(s);
    std::vector<std::string> codes;
    for (auto g : syn.sector_of) codes.push_back(kGicsSectors[g].code);
    const auto rows = compare_methods(compute_returns(syn.panel), codes);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.sector_mode.avg_in && r.sector_mode.avg_be);
        EXPECT_GT(*r.sector_mode.avg_in, *r.sector_mode.avg_be) << to_string(r.method);
        EXPECT_GT(*r.sector_mode.avg_in - *r.sector_mode.avg_be, *r.raw.avg_in - *r.raw.avg_be) << to_string(r.method);
        EXPECT_EQ(r.sector_mode.n_in + r.sector_mode.n_be, 3u * 58u);
    }
}
