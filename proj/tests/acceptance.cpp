// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance --work-dir DIR --cli PATH [gtest flags]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sectornet/sectornet.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace sectornet;
namespace fs = std::filesystem;

namespace {

fs::path g_work_dir = fs::temp_directory_path() / "sectornet_acceptance";
std::string g_cli;

Eigen::MatrixXd gaussian_series(Eigen::Index n, Eigen::Index l, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    Eigen::MatrixXd x(n, l);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index t = 0; t < l; ++t) x(i, t) = z(rng);
    return x;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
    return out;
}

} // namespace

TEST(Acceptance, C1_MarchenkoPasturBounds) {
    EXPECT_NEAR(mp_bounds(350, 362).lambda_max, 3.933, 0.005);
    EXPECT_NEAR(mp_bounds(350, 1819).lambda_max, 2.07, 0.01);
}

TEST(Acceptance, C2_ModeAdditivity) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        // vary L so the sector-mode count changes across matrices
        const Eigen::Index l = 60 + static_cast<Eigen::Index>(rng() % 400);
        Eigen::MatrixXd x = gaussian_series(50, l, rng);
        const Eigen::VectorXd common = gaussian_series(1, l, rng).row(0).transpose();
        for (Eigen::Index i = 0; i < 50; ++i) x.row(i) += (0.2 + 0.02 * static_cast<double>(i % 7)) * common.transpose();
        auto spec = pearson_matrix(x);
        eigendecompose(spec);
        const auto m = decompose_modes(spec);
        worst = std::max(worst, (spec.corr - (m.random + m.market + m.sector)).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(Acceptance, C3_PmfgStructure) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.99, 0.99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + rng() % 38;
        Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = i + 1; j < m.cols(); ++j) m(i, j) = m(j, i) = u(rng);
        const auto method = trial % 2 ? PmfgMethod::Absolute : PmfgMethod::Distance;
        const auto cand = build_candidates(m, method);
        const auto g = build_pmfg(cand, n, method);
        ASSERT_EQ(g.edges.size(), 3 * (n - 2)) << "n=" << n;
        EXPECT_TRUE(is_planar_embedding(n, g.edge_pairs(), planar_embedding(g))) << "n=" << n;
        std::vector<std::pair<std::size_t, std::size_t>> order;
        for (const auto& c : cand) order.emplace_back(c.i, c.j);
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (auto [i, j] : g.edge_pairs()) edges.insert({std::min(i, j), std::max(i, j)});
        for (const auto& e : oracle::kruskal(n, order)) EXPECT_TRUE(edges.count(e)) << "MST edge missing, n=" << n;
        if (n <= 9) {
            EXPECT_TRUE(oracle::planar_by_kuratowski(n, g.edge_pairs())) << "n=" << n;
            EXPECT_EQ(edges, oracle::greedy_planar_bruteforce(n, order)) << "n=" << n;
        }
    }
}

TEST(Acceptance, C4_InfomapExhaustiveOptimum) {
    for (const auto& f : fixture::small_fixtures()) {
        ASSERT_LE(f.n, 8u);
        const auto net = make_flow_network(f.n, f.edges);
        const auto w = fixture::dense(f.n, f.edges);
        double best = std::numeric_limits<double>::infinity();
        oracle::for_each_partition(f.n, [&](const std::vector<std::size_t>& a) {
            best = std::min(best, oracle::codelength_literal(w, net.visit_rate, a));
        });
        const auto p = detect_communities(net, 1, 20);
        EXPECT_NEAR(oracle::codelength_literal(w, net.visit_rate, p.assignment), best, 1e-12) << f.name;
    }
}

TEST(Acceptance, C5_PageRank) {
    const fixture::EdgeList star{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}};
    const auto net = make_flow_network(4, star);
    EXPECT_NEAR(net.visit_rate[0], 0.4797, 1e-4);
    const auto ref = oracle::pagerank_dense(fixture::dense(4, star), 0.85);
    EXPECT_NEAR(ref[0], 0.4797, 1e-4);
    auto graphs = fixture::small_fixtures();
    graphs.push_back({"star K1,3", 4, star});
    for (const auto& f : graphs) {
        const auto n = make_flow_network(f.n, f.edges);
        double total = 0;
        for (double p : n.visit_rate) total += p;
        EXPECT_NEAR(total, 1.0, 1e-10) << f.name;
        const auto r = oracle::pagerank_dense(fixture::dense(f.n, f.edges), 0.85);
        for (std::size_t u = 0; u < f.n; ++u) EXPECT_NEAR(n.visit_rate[u], r[u], 1e-9) << f.name;
    }
}

TEST(Acceptance, C6_PlantedSectorRecovery) {
    int recovered = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        PipelineConfig c;
        SyntheticSpec s; // 120 stocks, 600 days, 4 sectors, betas 0.7 / 0.5, noise 1.0
        s.seed = seed;
        c.synthetic = s;
        c.seed = seed;
        c.kinds = {SeriesKind::Return};
        c.sub_periods.clear();
        c.threads = 1;
        const auto r = run_pipeline(c);
        ASSERT_EQ(r.cells.size(), 1u);
        const auto& cell = r.cells[0];
        ASSERT_TRUE(cell.ok) << "seed " << seed;
        const double ari = oracle::adjusted_rand_index(cell.partition->assignment, r.planted);
        recovered += ari >= 0.9;
        std::cout << "  seed " << seed << ": ARI " << ari << ", modules " << cell.partition->module_count();
        for (const auto& row : cell.comparison) {
            ASSERT_TRUE(row.sector_mode.avg_in && row.sector_mode.avg_be);
            EXPECT_GT(*row.sector_mode.avg_in, *row.sector_mode.avg_be) << "seed " << seed << " " << to_string(row.method);
            std::cout << ", " << to_string(row.method) << " in/be " << *row.sector_mode.avg_in << "/"
                      << *row.sector_mode.avg_be;
        }
        std::cout << '\n';
    }
    EXPECT_GE(recovered, 8);
}

TEST(Acceptance, C7_NoiseCalibration) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        std::mt19937_64 rng(seed);
        auto spec = pearson_matrix(gaussian_series(200, 1000, rng));
        eigendecompose(spec);
        const auto m = decompose_modes(spec);
        std::size_t inside = 0;
        for (Eigen::Index a = 0; a < spec.eigenvalues.size(); ++a) {
            const double l = spec.eigenvalues(a);
            inside += l >= spec.bounds.lambda_min && l <= spec.bounds.lambda_max;
        }
        EXPECT_GE(static_cast<double>(inside), 0.98 * 200) << "seed " << seed;
        EXPECT_LE(m.sector_count, 2u) << "seed " << seed;
    }
}

TEST(Acceptance, C8_DeterministicBundle) {
    ASSERT_FALSE(g_cli.empty()) << "--cli not given";
    fs::create_directories(g_work_dir);
    const auto config = g_work_dir / "determinism.json";
    {
        std::ofstream out(config);
        out << R"({"synthetic": {"n_stocks": 60, "n_days": 1950, "seed": 4}, "seed": 4})" << '\n';
    }
    const auto a = g_work_dir / "run_a";
    const auto b = g_work_dir / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    for (const auto& dir : {a, b}) {
        const std::string cmd = "\"" + g_cli + "\" --config \"" + config.string() + "\" run --out \"" + dir.string() +
                                "\" > \"" + dir.string() + ".log\" 2>&1";
        ASSERT_EQ(std::system(cmd.c_str()), 0) << cmd;
    }
    auto ta = tree(a), tb = tree(b);
    ASSERT_EQ(ta.size(), tb.size());
    ASSERT_GT(ta.size(), 100u);
    auto strip_time = [](std::string& manifest) {
        auto j = nlohmann::json::parse(manifest);
        j.erase("generated_at");
        manifest = j.dump();
    };
    strip_time(ta.at("manifest.json"));
    strip_time(tb.at("manifest.json"));
    for (const auto& [path, content] : ta) {
        ASSERT_TRUE(tb.count(path)) << path;
        EXPECT_TRUE(content == tb.at(path)) << path;
    }
}

namespace {

// Prints one line per criterion in place of gtest's default output.
class CriterionPrinter : public ::testing::EmptyTestEventListener {
public:
    void OnTestStart(const ::testing::TestInfo&) override { start_ = std::chrono::steady_clock::now(); }

    void OnTestPartResult(const ::testing::TestPartResult& r) override {
        if (r.failed()) std::cerr << "    " << r.file_name() << ":" << r.line_number() << ": " << r.summary() << '\n';
    }

    void OnTestEnd(const ::testing::TestInfo& info) override {
        const auto s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1fs", s);
        std::cout << (info.result()->Passed() ? "PASS " : "FAIL ") << info.name() << " (" << buf << ")" << std::endl;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<char*> rest{argv[0]};
    for (int k = 1; k < argc; ++k) {
        const std::string arg = argv[k];
        if (arg == "--work-dir" && k + 1 < argc) g_work_dir = argv[++k];
        else if (arg == "--cli" && k + 1 < argc) g_cli = argv[++k];
        else rest.push_back(argv[k]);
    }
    int n = static_cast<int>(rest.size());
    ::testing::InitGoogleTest(&n, rest.data());
    auto& listeners = ::testing::UnitTest::GetInstance()->listeners();
    delete listeners.Release(listeners.default_result_printer());
    listeners.Append(new CriterionPrinter);
    return RUN_ALL_TESTS();
}
